"""Finite-dimensional algebras by structure constants, ideals and linear maps."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import InstanceError, InternalConsistencyError, StructuralError
from .linalg import EchelonBuilder, Field, Subspace, Vector, combine, is_zero, left_kernel, rref, solve_left, sub
from .report import VerificationReport


class Algebra:
    """An associative (not necessarily unital) algebra ``b_i b_j = sum_k c_ij^k b_k``.

    ``table`` maps ``(i, j)`` to ``{k: c}``; absent pairs multiply to zero.
    """

    def __init__(
        self,
        field: Field,
        dim: int,
        table: dict[tuple[int, int], dict[int, object]],
        labels: Sequence[str] | None = None,
        unit: Vector | None = None,
        name: str = "R",
    ):
        self.field = field
        self.dim = dim
        self.name = name
        self.labels = tuple(labels) if labels else tuple(f"b{i + 1}" for i in range(dim))
        if len(self.labels) != dim or len(set(self.labels)) != dim:
            raise StructuralError("basis labels must be distinct, one per basis vector")
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.table: dict[tuple[int, int], tuple] = {}
        self._rows: list[dict[int, tuple]] = [dict() for _ in range(dim)]
        for (i, j), terms in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise StructuralError(f"structure constant index ({i},{j}) out of range")
            nz = tuple((k, field(c)) for k, c in sorted(terms.items()) if field(c))
            for k, _ in nz:
                if not 0 <= k < dim:
                    raise StructuralError(f"structure constant target {k} out of range")
            if nz:
                self.table[(i, j)] = nz
                self._rows[i][j] = nz
        self.declared_unit = tuple(unit) if unit is not None else None

    # -- constructors ----------------------------------------------------------

    @classmethod
    def coordinate_ring(cls, field: Field, n: int, labels=None, name="R") -> "Algebra":
        """``K^n`` with componentwise product and idempotent basis ``e1..en``."""
        labels = labels or [f"e{i + 1}" for i in range(n)]
        table = {(i, i): {i: 1} for i in range(n)}
        return cls(field, n, table, labels, unit=(field.one,) * n, name=name)

    @classmethod
    def direct_product(cls, parts: Sequence["Algebra"], prefixes: Sequence[str] | None = None, name="P"):
        """Block-diagonal product; returns the algebra and the block offsets.

        Labels are kept as they are when they do not collide, otherwise each
        block's labels get its prefix (default: the block index).
        """
        if not parts:
            raise StructuralError("empty direct product")
        field = parts[0].field
        offsets, table, labels = [], {}, []
        plain = [lab for a in parts for lab in a.labels]
        keep = len(set(plain)) == len(plain)
        off = 0
        for idx, a in enumerate(parts):
            offsets.append(off)
            pre = prefixes[idx] if prefixes else f"{idx}"
            labels.extend(a.labels if keep else [f"{pre}.{lab}" for lab in a.labels])
            for (i, j), terms in a.table.items():
                table[(i + off, j + off)] = {k + off: c for k, c in terms}
            off += a.dim
        unit = None
        if all(a.unit is not None for a in parts):
            unit = tuple(x for a in parts for x in a.unit)
        return cls(field, off, table, labels, unit=unit, name=name), offsets

    # -- elements --------------------------------------------------------------

    @property
    def zero(self) -> Vector:
        return self.field.zeros(self.dim)

    def basis(self, i: int) -> Vector:
        return self.field.unit_vector(self.dim, i)

    def label_index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise InstanceError(f"unknown basis label {label!r} in algebra {self.name}") from None

    def mul(self, u: Vector, v: Vector) -> Vector:
        acc = [self.field.zero] * self.dim
        vnz = [(j, b) for j, b in enumerate(v) if b]
        if not vnz:
            return tuple(acc)
        for i, a in enumerate(u):
            if not a:
                continue
            row = self._rows[i]
            if not row:
                continue
            for j, b in vnz:
                terms = row.get(j)
                if terms:
                    ab = a * b
                    for k, c in terms:
                        acc[k] += ab * c
        return tuple(acc)

    def mul_many(self, *vs: Vector) -> Vector:
        out = vs[0]
        for v in vs[1:]:
            out = self.mul(out, v)
        return out

    _TERM = re.compile(r"^(?P<coef>\d+(?:/\d+)?)?\s*[*·]?\s*(?P<label>[A-Za-z_][\w.:#\[\]]*)?$")

    def element(self, spec) -> Vector:
        """Parse ``[c1, ..., cn]`` or an expression like ``"e2 + 2*e3"``."""
        if isinstance(spec, (list, tuple)):
            if len(spec) != self.dim:
                raise InstanceError(f"vector of length {len(spec)} for algebra of dimension {self.dim}")
            return self.field.vector(spec)
        if isinstance(spec, int):
            spec = str(spec)
        if not isinstance(spec, str):
            raise InstanceError(f"cannot read an element from {spec!r}")
        text = spec.replace(" ", "")
        if not text:
            raise InstanceError("empty element expression")
        acc = list(self.zero)
        if text[0] not in "+-":
            text = "+" + text
        if not re.fullmatch(r"([+-][^+-]+)+", text):
            raise InstanceError(f"cannot parse element {spec!r}")
        for sign, term in re.findall(r"([+-])([^+-]+)", text):
            m = self._TERM.match(term)
            if not m or (m.group("coef") is None and m.group("label") is None):
                raise InstanceError(f"cannot parse term {term!r} in {spec!r}")
            coef = self.field(m.group("coef") or "1")
            if sign == "-":
                coef = -coef
            label = m.group("label")
            if label is None:
                if self.unit is None:
                    raise InstanceError(f"scalar term {term!r} needs a unital algebra")
                for k, x in enumerate(self.unit):
                    acc[k] += coef * x
            else:
                acc[self.label_index(label)] += coef
        return tuple(acc)

    def fmt(self, v: Vector) -> str:
        terms = []
        for i, c in enumerate(v):
            if not c:
                continue
            neg = (not self.field.characteristic) and c < 0
            mag = -c if neg else c
            s = self.labels[i] if mag == self.field.one else f"{self.field.fmt(mag)}·{self.labels[i]}"
            terms.append(("-" if neg else "+", s))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, s in terms[1:]:
            out += f" {sign} {s}"
        return out

    # -- structure -------------------------------------------------------------

    @cached_property
    def unit(self) -> Vector | None:
        if self.declared_unit is not None:
            return self.declared_unit
        return find_unit(self, Subspace.full(self.field, self.dim))

    @cached_property
    def is_commutative(self) -> bool:
        return all(self.table.get((j, i), ()) == t for (i, j), t in self.table.items()) and all(
            (j, i) in self.table for (i, j) in self.table
        )

    def associativity_witness(self) -> tuple[int, int, int] | None:
        """A basis triple with ``(b_i b_j) b_k != b_i (b_j b_k)``, or None.

        Only products that can be non-zero are expanded, so the cost follows
        the sparsity of the table rather than ``dim**3``.
        """
        zero = self.field.zero
        left: dict[tuple[int, int, int], dict[int, object]] = {}
        for (i, j), terms in self.table.items():
            for m, c in terms:
                for k, terms2 in self._rows[m].items():
                    acc = left.setdefault((i, j, k), {})
                    for p, c2 in terms2:
                        acc[p] = acc.get(p, zero) + c * c2
        right: dict[tuple[int, int, int], dict[int, object]] = {}
        cols: dict[int, list[tuple[int, tuple]]] = {}
        for (i, m), terms in self.table.items():
            cols.setdefault(m, []).append((i, terms))
        for (j, k), terms in self.table.items():
            for m, c in terms:
                for i, terms2 in cols.get(m, ()):
                    acc = right.setdefault((i, j, k), {})
                    for p, c2 in terms2:
                        acc[p] = acc.get(p, zero) + c * c2
        for key in set(left) | set(right):
            lv = {p: x for p, x in left.get(key, {}).items() if x}
            rv = {p: x for p, x in right.get(key, {}).items() if x}
            if lv != rv:
                return key
        return None

    def verify(self) -> VerificationReport:
        rep = VerificationReport(f"algebra {self.name}")
        w = self.associativity_witness()
        rep.add("associativity", w is None, None if w is None else tuple(self.labels[i] for i in w))
        if self.declared_unit is not None:
            u = self.declared_unit
            bad = [
                self.labels[i]
                for i in range(self.dim)
                if self.mul(u, self.basis(i)) != self.basis(i) or self.mul(self.basis(i), u) != self.basis(i)
            ]
            rep.add("unit", not bad, bad[0] if bad else None)
        return rep

    def subalgebra(self, space: Subspace, labels=None, name="S") -> tuple["Algebra", "LinMap"]:
        """The multiplicatively closed ``space`` as an algebra in its echelon basis."""
        basis = space.rows
        table = {}
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                p = self.mul(u, v)
                if is_zero(p):
                    continue
                try:
                    c = space.coords(p)
                except ValueError:
                    raise StructuralError(f"subspace not closed under multiplication at basis pair ({i},{j})")
                table[(i, j)] = {k: x for k, x in enumerate(c) if x}
        unit = None
        u = find_unit(self, space)
        if u is not None:
            unit = space.coords(u)
        alg = Algebra(self.field, space.dim, table, labels, unit=unit, name=name)
        emb = LinMap(alg, self, Subspace.full(self.field, space.dim), space, tuple(basis))
        return alg, emb

    def to_dict(self) -> dict:
        f = self.field
        d = {
            "labels": list(self.labels),
            "products": [
                [self.labels[i], self.labels[j], {self.labels[k]: f.plain(c) for k, c in terms}]
                for (i, j), terms in sorted(self.table.items())
            ],
        }
        if self.declared_unit is not None:
            d["unit"] = [f.plain(x) for x in self.declared_unit]
        return d

    def is_coordinate_ring(self) -> bool:
        return len(self.table) == self.dim and all(
            self.table.get((i, i)) == ((i, self.field.one),) for i in range(self.dim)
        )

    def __repr__(self):
        return f"Algebra({self.name}, dim={self.dim}, {self.field.name})"


# -- linear maps ---------------------------------------------------------------

class LinMap:
    """A linear map between subspaces of two algebras.

    ``images[i]`` is the image of ``domain.rows[i]``, in ambient coordinates of
    the target algebra.
    """

    __slots__ = ("source", "target", "domain", "codomain", "images")

    def __init__(self, source: Algebra, target: Algebra, domain: Subspace, codomain: Subspace, images):
        if len(images) != domain.dim:
            raise StructuralError(f"{len(images)} images for a domain of dimension {domain.dim}")
        for v in images:
            if len(v) != target.dim:
                raise StructuralError("image vector has the wrong length")
        self.source = source
        self.target = target
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(tuple(v) for v in images)

    @classmethod
    def from_images(cls, source, target, vectors, images, codomain=None) -> "LinMap":
        """The map sending each ``vectors[k]`` to ``images[k]``.

        The pairs are reduced jointly, so dependent ``vectors`` are accepted
        as long as the assignment is consistent.
        """
        vectors = [tuple(v) for v in vectors]
        images = [tuple(w) for w in images]
        if len(vectors) != len(images):
            raise StructuralError("need exactly one image per vector")
        n, m = source.dim, target.dim
        rows, pivots = rref(source.field, [v + w for v, w in zip(vectors, images)], n + m)
        dom_rows, dom_piv, imgs = [], [], []
        for row, p in zip(rows, pivots):
            if p >= n:
                raise StructuralError("inconsistent linear map: a relation among the inputs is not respected")
            dom_rows.append(row[:n])
            dom_piv.append(p)
            imgs.append(row[n:])
        domain = Subspace(source.field, n, tuple(dom_rows), tuple(dom_piv))
        if codomain is None:
            codomain = Subspace.span(target.field, m, imgs)
        return cls(source, target, domain, codomain, imgs)

    @classmethod
    def identity(cls, algebra: Algebra, space: Subspace) -> "LinMap":
        return cls(algebra, algebra, space, space, space.rows)

    @property
    def field(self) -> Field:
        return self.source.field

    def __call__(self, v: Vector) -> Vector:
        try:
            c = self.domain.coords(v)
        except ValueError:
            raise StructuralError("argument outside the domain of the map") from None
        return combine(self.field, c, self.images, self.target.dim)

    def apply_coords(self, c) -> Vector:
        return combine(self.field, c, self.images, self.target.dim)

    @property
    def matrix(self) -> tuple:
        """Codomain-basis coordinates of the images of the domain basis."""
        return tuple(self.codomain.coords(w) for w in self.images)

    def image(self, space: Subspace | None = None) -> Subspace:
        rows = self.images if space is None else [self(v) for v in space.rows]
        return Subspace.span(self.field, self.target.dim, rows)

    def preimage(self, space: Subspace) -> Subspace:
        """``{x in domain : f(x) in space}`` by a kernel computation."""
        residues = [space.reduce(w) for w in self.images]
        ker = left_kernel(self.field, residues, self.target.dim)
        vecs = [combine(self.field, c, self.domain.rows, self.source.dim) for c in ker]
        return Subspace.span(self.field, self.source.dim, vecs)

    def restrict(self, space: Subspace, codomain: Subspace | None = None) -> "LinMap":
        if not space <= self.domain:
            raise StructuralError("restriction to a subspace outside the domain")
        imgs = [self(v) for v in space.rows]
        cod = codomain if codomain is not None else Subspace.span(self.field, self.target.dim, imgs)
        return LinMap(self.source, self.target, space, cod, imgs)

    def compose(self, inner: "LinMap") -> "LinMap":
        """``self o inner`` on the part of inner's domain mapped into self's domain."""
        dom = inner.preimage(self.domain)
        imgs = [self(inner(v)) for v in dom.rows]
        return LinMap(inner.source, self.target, dom, self.codomain, imgs)

    def is_injective(self) -> bool:
        return Subspace.span(self.field, self.target.dim, self.images).dim == self.domain.dim

    def is_bijective(self) -> bool:
        return self.is_injective() and self.image() == self.codomain

    def inverse(self) -> "LinMap":
        if not self.is_bijective():
            raise StructuralError("map is not bijective onto its codomain")
        return LinMap.from_images(self.target, self.source, self.images, self.domain.rows, codomain=self.domain)

    def agrees_with(self, other: "LinMap", space: Subspace | None = None) -> Vector | None:
        """First basis vector of ``space`` (default: domain) where the maps differ."""
        space = self.domain if space is None else space
        for v in space.rows:
            if self(v) != other(v):
                return v
        return None

    def __eq__(self, other):
        return (
            isinstance(other, LinMap)
            and self.domain == other.domain
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.domain, self.images))

    def __repr__(self):
        return f"LinMap({self.domain.dim} -> {self.codomain.dim})"


# -- ideals and units ------------------------------------------------------------

def ideal_witness(algebra: Algebra, space: Subspace, container: Subspace | None = None):
    """None if ``space`` is a two-sided ideal of ``container`` (default: whole algebra).

    Otherwise a pair ``(side, b, v)`` where the product leaves the space.
    """
    if container is not None and not space <= container:
        bad = next(v for v in space.rows if v not in container)
        return ("not_contained", None, bad)
    outer = container.rows if container is not None else [algebra.basis(i) for i in range(algebra.dim)]
    for b in outer:
        for v in space.rows:
            if algebra.mul(b, v) not in space:
                return ("left", b, v)
            if algebra.mul(v, b) not in space:
                return ("right", v, b)
    return None


def find_unit(algebra: Algebra, space: Subspace) -> Vector | None:
    """The identity element of the ring ``space``, or None if it has none.

    Solves ``u v = v u = v`` for ``u`` in the span over every basis vector
    ``v``; the solution, when it exists, is unique.
    """
    n = algebra.dim
    if space.dim == 0:
        return algebra.zero
    basis = space.rows
    rows = []
    for vk in basis:
        row = []
        for vm in basis:
            row.extend(algebra.mul(vk, vm))
            row.extend(algebra.mul(vm, vk))
        rows.append(tuple(row))
    target = []
    for vm in basis:
        target.extend(vm)
        target.extend(vm)
    sol = solve_left(algebra.field, rows, tuple(target))
    if sol is None:
        return None
    return combine(algebra.field, sol, basis, n)


def is_central_idempotent(algebra: Algebra, u: Vector, within: Subspace | None = None) -> bool:
    if algebra.mul(u, u) != u:
        return False
    outer = within.rows if within is not None else [algebra.basis(i) for i in range(algebra.dim)]
    return all(algebra.mul(u, b) == algebra.mul(b, u) for b in outer)


def ideal_unit(algebra: Algebra, space: Subspace) -> Vector | None:
    """``find_unit`` plus the check that a found unit is central and idempotent."""
    u = find_unit(algebra, space)
    if u is not None and not is_central_idempotent(algebra, u):
        raise InternalConsistencyError("identity of an ideal is not a central idempotent")
    return u


def inverse_in(algebra: Algebra, x: Vector, space: Subspace, unit: Vector) -> Vector | None:
    """``y`` in ``space`` with ``xy = yx = unit``, or None."""
    rows = []
    for b in space.rows:
        rows.append(algebra.mul(x, b) + algebra.mul(b, x))
    sol = solve_left(algebra.field, rows, tuple(unit) + tuple(unit))
    if sol is None:
        return None
    return combine(algebra.field, sol, space.rows, algebra.dim)


def product_span(algebra: Algebra, left: Subspace, right: Subspace) -> Subspace:
    return Subspace.span(
        algebra.field, algebra.dim, [algebra.mul(u, v) for u in left.rows for v in right.rows]
    )


def verify_ring_iso(f: LinMap, name: str = "map") -> VerificationReport:
    rep = VerificationReport(f"ring isomorphism {name}")
    inj = f.is_injective()
    onto = f.image() == f.codomain
    rep.add("bijective", inj and onto, None if inj and onto else ("injective" if inj else "not injective",
                                                                  "onto" if onto else "not onto"))
    src, tgt = f.source, f.target
    basis = f.domain.rows
    witness = None
    for u in basis:
        for v in basis:
            uv = src.mul(u, v)
            if uv not in f.domain:
                witness = (src.fmt(u), src.fmt(v), "product leaves the domain")
                break
            if f(uv) != tgt.mul(f(u), f(v)):
                witness = (src.fmt(u), src.fmt(v))
                break
        if witness:
            break
    rep.add("multiplicative", witness is None, witness)
    return rep


# -- subalgebra closure ----------------------------------------------------------

@dataclass
class Closure:
    """Result of :func:`subalgebra_closure`.

    ``exprs[i]`` explains ``vectors[i]``: ``("gen", k)`` is the k-th generator,
    ``("mul", a, b)`` is ``vectors[a] * vectors[b]``.
    """

    space: Subspace
    vectors: list[Vector]
    exprs: list[tuple]
    generators: list[Vector] = field(default_factory=list)

    @property
    def products_needed(self) -> bool:
        return any(e[0] == "mul" for e in self.exprs)

    def evaluate(self, gen_values: Sequence[Vector], mul) -> list[Vector]:
        """Re-run the recorded expressions with substituted generator values."""
        out: list[Vector] = []
        for e in self.exprs:
            if e[0] == "gen":
                out.append(tuple(gen_values[e[1]]))
            else:
                out.append(mul(out[e[1]], out[e[2]]))
        return out


def subalgebra_closure(algebra: Algebra, generators: Sequence) -> Closure:
    """Smallest multiplicatively closed subspace containing the generators.

    ``generators`` may mix vectors and subspaces; subspaces contribute their
    echelon bases, in order.
    """
    gens: list[Vector] = []
    for g in generators:
        if isinstance(g, Subspace):
            gens.extend(g.rows)
        else:
            gens.append(tuple(g))
    eb = EchelonBuilder(algebra.field, algebra.dim)
    vecs: list[Vector] = []
    exprs: list[tuple] = []
    for k, g in enumerate(gens):
        if eb.add(g):
            vecs.append(g)
            exprs.append(("gen", k))
    i = 0
    while i < len(vecs):
        for j in range(i + 1):
            for a, b in ((i, j), (j, i)):
                p = algebra.mul(vecs[a], vecs[b])
                if eb.add(p):
                    vecs.append(p)
                    exprs.append(("mul", a, b))
        i += 1
    return Closure(eb.subspace(), vecs, exprs, gens)


def sub_vectors(u: Vector, v: Vector) -> Vector:
    return sub(u, v)


def basis_labels(algebra: Algebra, space: Subspace, prefix: str = "u") -> list[str]:
    """Labels for an echelon basis: reuse ambient labels for coordinate vectors."""
    one = algebra.field.one
    out = []
    for k, row in enumerate(space.rows):
        nz = [i for i, a in enumerate(row) if a]
        if len(nz) == 1 and row[nz[0]] == one:
            out.append(algebra.labels[nz[0]])
        else:
            out.append(f"{prefix}{k + 1}")
    return out
