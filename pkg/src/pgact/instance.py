"""Reading and writing instance files (YAML, validated against a JSON schema)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
import yaml

from .action import PartialAction
from .algebra import Algebra, LinMap
from .errors import InstanceError, PgactError
from .galois import Module
from .globalize import Globalization
from .groupoid import Groupoid
from .linalg import Field, Subspace

FORMAT = "pgact-instance/1"


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files("pgact").joinpath("schema/instance.schema.json").read_text()
    return json.loads(text)


@dataclass
class Instance:
    action: PartialAction
    galois_system: list | None = None
    module_specs: list[dict] = field(default_factory=list)
    globalization: dict | None = None
    enumeration: dict | None = None
    name: str = ""
    _reader: Any = field(default=None, repr=False)

    @property
    def field(self) -> Field:
        return self.action.algebra.field

    @property
    def groupoid(self) -> Groupoid:
        return self.action.groupoid

    @property
    def algebra(self) -> Algebra:
        return self.action.algebra


class _Lines:
    """Map a path of keys and indices to a line number of the YAML source."""

    def __init__(self, text: str):
        try:
            self.root = yaml.compose(text)
        except yaml.YAMLError:
            self.root = None

    def line(self, path) -> int | None:
        node = self.root
        best = None if node is None else node.start_mark.line + 1
        for key in path:
            if node is None:
                break
            nxt = None
            if isinstance(node, yaml.MappingNode):
                for k, v in node.value:
                    if str(k.value) == str(key):
                        nxt = v
                        best = k.start_mark.line + 1
                        break
            elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
                nxt = node.value[key]
                best = nxt.start_mark.line + 1
            node = nxt
        return best


class _Reader:
    def __init__(self, data: dict, lines: _Lines | None, field_override: Field | None):
        self.data = data
        self.lines = lines

        try:
            self.field = field_override or Field.parse(data.get("field", "rational"))
        except InstanceError as exc:
            raise self.error(str(exc), ["field"]) from None

    def error(self, message: str, path) -> InstanceError:
        line = self.lines.line(path) if self.lines else None
        return InstanceError(message, ".".join(str(p) for p in path), line)

    def guard(self, path, fn, *args):
        try:
            return fn(*args)
        except InstanceError as exc:
            if exc.field:
                raise
            raise self.error(exc.args[0], path) from None
        except (PgactError, ValueError, KeyError, ZeroDivisionError) as exc:
            raise self.error(str(exc), path) from None

    def element(self, R: Algebra, spec, path):
        return self.guard(path, R.element, spec)

    def groupoid(self, sec: dict, path) -> Groupoid:
        elements = [str(g) for g in sec["elements"]]
        if len(set(elements)) != len(elements):
            raise self.error("duplicate groupoid elements", path + ["elements"])
        compose = {}
        for k, (g, h, gh) in enumerate(sec["compose"]):
            key = (str(g), str(h))
            if key in compose:
                raise self.error(f"product {g}*{h} given twice", path + ["compose", k])
            compose[key] = str(gh)
        inverse = {str(k): str(v) for k, v in sec["inverse"].items()}
        return self.guard(path, Groupoid, elements, compose, inverse, sec.get("name", "G"))

    def algebra(self, sec: dict, path, name="R") -> Algebra:
        name = sec.get("name", name)
        if "coordinate_ring" in sec:
            R = Algebra.coordinate_ring(self.field, sec["coordinate_ring"], name=name)
            if "labels" in sec:
                labels = [str(x) for x in sec["labels"]]
                if len(labels) != R.dim or len(set(labels)) != len(labels):
                    raise self.error(f"need {R.dim} distinct labels", path + ["labels"])
                R = Algebra(self.field, R.dim, {k: dict(v) for k, v in R.table.items()}, labels, R.declared_unit, name)
            return R
        labels = [str(x) for x in sec["labels"]]
        if len(set(labels)) != len(labels):
            raise self.error("duplicate basis labels", path + ["labels"])
        index = {lab: i for i, lab in enumerate(labels)}
        table: dict = {}
        shell = Algebra(self.field, len(labels), {}, labels, name=name)
        unit = None
        if "unit" in sec:
            unit = self.element(shell, sec["unit"], path + ["unit"])
            # scalar terms in products refer to the declared unit
            shell = Algebra(self.field, len(labels), {}, labels, unit, name=name)
        for k, (a, b, value) in enumerate(sec["products"]):
            p = path + ["products", k]
            if a not in index or b not in index:
                raise self.error(f"unknown label in product {a}*{b}", p)
            if isinstance(value, dict):
                terms = {}
                for lab, c in value.items():
                    if lab not in index:
                        raise self.error(f"unknown label {lab!r}", p)
                    terms[index[lab]] = self.guard(p, self.field, c)
            else:
                v = self.element(shell, value, p)
                terms = {i: c for i, c in enumerate(v) if c}
            if (index[a], index[b]) in table:
                raise self.error(f"product {a}*{b} given twice", p)
            table[(index[a], index[b])] = terms
        return self.guard(path, Algebra, self.field, len(labels), table, labels, unit, name)

    def action(self, G: Groupoid, R: Algebra, sec: dict, path, name="alpha") -> PartialAction:
        rows, images = {}, {}
        sec = {str(k): v for k, v in sec.items()}
        for g in G:
            if g not in sec:
                raise self.error(f"no data for arrow {g!r}", path)
        for g in sec:
            if str(g) not in G.elements:
                raise self.error(f"unknown arrow {g!r}", path + [g])
        for g in G:
            entry = sec[g]
            rows[g] = [self.element(R, v, path + [g, "ideal", k]) for k, v in enumerate(entry["ideal"])]
        for g in G:
            m = sec[g]["map"]
            images[g] = m if isinstance(m, str) else [
                self.element(R, v, path + [g, "map", k]) for k, v in enumerate(m)
            ]
        return self.guard(path, PartialAction.from_data, G, R, rows, images, name)


def load_instance(text: str, field_override: Field | None = None) -> Instance:
    """Parse and validate an instance; errors carry the field path and line."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise InstanceError(f"not valid YAML: {getattr(exc, 'problem', exc)}",
                            None, None if mark is None else mark.line + 1) from None
    lines = _Lines(text)
    return instance_from_data(data, lines, field_override)


def instance_from_data(data: Any, lines: _Lines | None = None, field_override: Field | None = None) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("an instance must be a mapping")
    validator = jsonschema.Draft202012Validator(schema())
    # best_match descends into oneOf branches, so the path points at the offending value
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        path = list(err.absolute_path)
        line = lines.line(path) if lines else None
        raise InstanceError(f"schema violation: {err.message}", ".".join(map(str, path)) or "<root>", line)
    rd = _Reader(data, lines, field_override)
    G = rd.groupoid(data["groupoid"], ["groupoid"])
    R = rd.algebra(data["algebra"], ["algebra"])
    A = rd.action(G, R, data["action"], ["action"])
    # the reader is kept so a supplied globalization can be built on demand
    inst = Instance(A, name=data.get("name", ""), _reader=rd)
    if "galois_system" in data:
        inst.galois_system = [
            (rd.element(R, x, ["galois_system", k, 0]), rd.element(R, y, ["galois_system", k, 1]))
            for k, (x, y) in enumerate(data["galois_system"])
        ]
    if "enumeration" in data:
        enum = {str(e): [str(h) for h in hs] for e, hs in data["enumeration"].items()}
        for e in enum:
            rd.guard(["enumeration", e], G.xset, e, enum)
        inst.enumeration = enum
    inst.module_specs = list(data.get("modules", []))
    if "globalization" in data:
        inst.globalization = data["globalization"]
    return inst


def load_modules(inst: Instance, ring) -> list[Module]:
    """Action matrices are keyed by the skew ring's basis labels; absent keys act as 0."""
    out = []
    F = inst.field
    labels = ring.algebra.labels
    for k, spec in enumerate(inst.module_specs):
        n = spec["dim"]
        mats = []
        for lab in spec["action"]:
            if lab not in labels:
                raise InstanceError(f"unknown skew ring basis label {lab!r}; known: {', '.join(labels)}",
                                    f"modules.{k}.action.{lab}")
        for lab in labels:
            if lab in spec["action"]:
                mat = spec["action"][lab]
                if len(mat) != n or any(len(r) != n for r in mat):
                    raise InstanceError(f"expected a {n}x{n} matrix", f"modules.{k}.action.{lab}")
                mats.append([[F(c) for c in r] for r in mat])
            else:
                mats.append([[F.zero] * n for _ in range(n)])
        out.append(Module(n, mats, spec.get("name", f"M{k + 1}")))
    return out


def supplied_globalization(inst: Instance) -> Globalization | None:
    if inst.globalization is None:
        return None
    rd: _Reader = inst._reader
    sec = inst.globalization
    G, A = inst.groupoid, inst.action
    T = rd.algebra(sec["algebra"], ["globalization", "algebra"], name="T")
    beta = rd.action(G, T, sec["action"], ["globalization", "action"], name="beta")
    phi = {}
    for e in G.identities:
        if e not in sec["embeddings"]:
            raise rd.error(f"no embedding for D_{e}", ["globalization", "embeddings"])
        path = ["globalization", "embeddings", e]
        imgs = [rd.element(T, v, path + [k]) for k, v in enumerate(sec["embeddings"][e])]
        src = A.D(e).rows
        if len(imgs) != len(src):
            raise rd.error(f"need {len(src)} images, one per basis row of D_{e}", path)
        phi[e] = rd.guard(path, LinMap.from_images, A.algebra, T, src, imgs)
    return rd.guard(["globalization"], Globalization.from_parts, A, beta, phi, inst.enumeration)


# -- serialization -----------------------------------------------------------------

def element_data(R: Algebra, v):
    """A readable expression when it parses back exactly, else coordinates."""
    text = R.fmt(v)
    try:
        if R.element(text) == tuple(v):
            return text
    except PgactError:
        pass
    return [R.field.plain(c) for c in v]


def algebra_data(R: Algebra) -> dict:
    if R.is_coordinate_ring():
        d = {"coordinate_ring": R.dim}
        if list(R.labels) != [f"e{i + 1}" for i in range(R.dim)]:
            d["labels"] = list(R.labels)
        return d
    d = R.to_dict()
    products = []
    for (a, b, terms), ((i, j), _) in zip(d["products"], sorted(R.table.items())):
        expr = element_data(R, R.mul(R.basis(i), R.basis(j)))
        products.append([a, b, expr if isinstance(expr, str) else terms])
    d["products"] = products
    return d


def action_data(A: PartialAction) -> dict:
    R, G = A.algebra, A.groupoid
    out = {}
    for g in G:
        rows = A.D(g).rows
        src = A.D(G.inverse(g)).rows
        imgs = [A.alpha(g)(v) for v in src]
        out[g] = {
            "ideal": [element_data(R, v) for v in rows],
            "map": "identity" if imgs == list(src) else [element_data(R, v) for v in imgs],
        }
    return out


def instance_data(A: PartialAction, galois_system=None, globalization: Globalization | None = None,
                  modules: list[dict] | None = None, enumeration=None, name: str = "") -> dict:
    d: dict = {"format": FORMAT}
    if name:
        d["name"] = name
    d["field"] = A.field.name
    d["groupoid"] = A.groupoid.to_dict()
    d["algebra"] = algebra_data(A.algebra)
    d["action"] = action_data(A)
    if enumeration:
        d["enumeration"] = {e: list(hs) for e, hs in enumeration.items()}
    if galois_system is not None:
        R = A.algebra
        d["galois_system"] = [[element_data(R, x), element_data(R, y)] for x, y in galois_system]
    if modules:
        d["modules"] = modules
    if globalization is not None:
        T = globalization.T
        d["globalization"] = {
            "algebra": algebra_data(T),
            "action": action_data(globalization.beta),
            "embeddings": {
                e: [element_data(T, globalization.phi[e](v)) for v in A.D(e).rows]
                for e in A.groupoid.identities
            },
        }
    return d


def dump_yaml(data: dict) -> str:
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True, default_flow_style=None, width=100)


def algebra_file(R: Algebra) -> dict:
    """Standalone structure-constant file for an algebra (e.g. a skew ring)."""
    return {"format": "pgact-algebra/1", "field": R.field.name, "name": R.name, "algebra": algebra_data(R)}


def load_algebra_file(text: str) -> Algebra:
    data = yaml.safe_load(text)
    if not isinstance(data, dict) or data.get("format") != "pgact-algebra/1":
        raise InstanceError("not a pgact-algebra/1 file", "format")
    rd = _Reader(data, _Lines(text), None)
    sec = dict(data["algebra"])
    return rd.algebra(sec, ["algebra"], name=data.get("name", "R"))


# -- structural equality used by round-trip checks -----------------------------------

def algebras_equal(R: Algebra, S: Algebra) -> bool:
    return (R.field == S.field and R.dim == S.dim and tuple(R.labels) == tuple(S.labels)
            and dict(R.table) == dict(S.table))


def actions_equal(A: PartialAction, B: PartialAction) -> bool:
    G, H = A.groupoid, B.groupoid
    if G.elements != H.elements or G.to_dict() != H.to_dict():
        return False
    if not algebras_equal(A.algebra, B.algebra):
        return False
    for g in G:
        if A.D(g) != B.D(g):
            return False
        fa, fb = A.alpha(g), B.alpha(g)
        if any(fa(v) != fb(v) for v in A.D(G.inverse(g)).rows):
            return False
    return True


def globalizations_equal(X: Globalization, Y: Globalization) -> bool:
    if not actions_equal(X.beta, Y.beta) or not actions_equal(X.action, Y.action):
        return False
    A = X.action
    return all(X.phi[e](v) == Y.phi[e](v) for e in A.groupoid.identities for v in A.D(e).rows)


def subspace_data(R: Algebra, S: Subspace) -> list:
    return [element_data(R, v) for v in S.rows]
