"""Finite groupoids given by explicit partial composition tables."""
from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import AxiomError, DomainError, StructuralError
from .report import VerificationReport


def verify_groupoid(
    elements: Sequence[str],
    compose: Mapping[tuple[str, str], str],
    inverse: Mapping[str, str],
) -> VerificationReport:
    """Scan the four groupoid axioms exhaustively.

    Raises StructuralError when the table mentions unknown elements or the
    inverse map is not total; all axiom failures are reported with witnesses.
    On success ``report.data`` holds the derived source/target maps.
    """
    elements = list(elements)
    known = set(elements)
    if len(known) != len(elements):
        raise StructuralError("duplicate element ids")
    if not elements:
        raise StructuralError("a groupoid is non-empty")
    for (g, h), gh in compose.items():
        for x in (g, h, gh):
            if x not in known:
                raise StructuralError(f"composition ({g},{h}) -> {gh} names unknown element {x!r}")
    for g in elements:
        if g not in inverse or inverse[g] not in known:
            raise StructuralError(f"inverse of {g!r} missing or unknown")

    rep = VerificationReport("groupoid")

    def c(g, h):
        return compose.get((g, h))

    # (iii) local identities
    d, r = {}, {}
    for g in elements:
        right = [e for e in elements if c(g, e) == g]
        left = [e for e in elements if c(e, g) == g]
        # among several candidates, the true d(g) must also satisfy (iv)
        right_iv = [e for e in right if c(inverse[g], g) == e] or right
        left_iv = [e for e in left if c(g, inverse[g]) == e] or left
        if len(right_iv) == 1 and len(left_iv) == 1:
            d[g], r[g] = right_iv[0], left_iv[0]
            rep.add("axiom_iii", True, g)
        else:
            rep.add("axiom_iii", False, g, f"right units {right}, left units {left}")

    # (iv) inverses
    for g in elements:
        gi = inverse[g]
        if g in d:
            ok_d = c(gi, g) == d[g]
            ok_r = c(g, gi) == r[g]
            if not ok_d:
                rep.add("axiom_iv", False, (gi, g), f"{gi}*{g} = {c(gi, g)} but d({g}) = {d[g]}")
            if not ok_r:
                rep.add("axiom_iv", False, (g, gi), f"{g}*{gi} = {c(g, gi)} but r({g}) = {r[g]}")
            if ok_d and ok_r:
                rep.add("axiom_iv", True, g)

    # (i) and (ii) on all triples
    fail_i = fail_ii = 0
    for g, h, l in product(elements, repeat=3):
        hl, gh = c(h, l), c(g, h)
        left = c(g, hl) if hl is not None else None
        right = c(gh, l) if gh is not None else None
        if (left is None) != (right is None) or (left is not None and left != right):
            fail_i += 1
            if fail_i <= 5:
                rep.add("axiom_i", False, (g, h, l), f"g(hl)={left}, (gh)l={right}")
        if (left is not None) != (gh is not None and hl is not None):
            fail_ii += 1
            if fail_ii <= 5:
                rep.add("axiom_ii", False, (g, h, l), f"g(hl)={left}, gh={gh}, hl={hl}")
    if not fail_i:
        rep.add("axiom_i", True)
    if not fail_ii:
        rep.add("axiom_ii", True)

    if len(d) == len(elements):
        extra = [(g, h) for g, h in product(elements, repeat=2) if c(g, h) is not None and d[g] != r[h]]
        missing = [(g, h) for g, h in product(elements, repeat=2) if c(g, h) is None and d[g] == r[h]]
        for g, h in extra[:5]:
            rep.add("defined_off_G2", False, (g, h), f"{g}*{h} defined but d({g})={d[g]} != r({h})={r[h]}")
        for g, h in missing[:5]:
            rep.add("missing_on_G2", False, (g, h), f"d({g}) = r({h}) = {d[g]} but {g}*{h} undefined")
        if not extra and not missing:
            rep.add("composable_iff_d_eq_r", True)
        if rep.ok:
            _derived_checks(rep, elements, compose, inverse, d, r)
    rep.data.update(source=d, target=r)
    return rep


def _derived_checks(rep, elements, compose, inverse, d, r):
    bad = []
    for (g, h), gh in compose.items():
        if d[gh] != d[h] or r[gh] != r[g] or inverse[gh] != compose.get((inverse[h], inverse[g])):
            bad.append((g, h))
    rep.add("derived_product_laws", not bad, bad[0] if bad else None)
    bad = [g for g in elements if inverse[inverse[g]] != g]
    rep.add("double_inverse", not bad, bad[0] if bad else None)
    idents = {d[g] for g in elements} | {r[g] for g in elements}
    bad = [e for e in idents if not (d[e] == r[e] == e == inverse[e])]
    rep.add("identity_laws", not bad, bad[0] if bad else None)


class Groupoid:
    """A verified finite groupoid.

    Element ids are opaque strings; declaration order is significant because
    it fixes the enumeration of the sets ``X_e``.
    """

    def __init__(
        self,
        elements: Sequence[str],
        compose: Mapping[tuple[str, str], str],
        inverse: Mapping[str, str],
        name: str = "G",
    ):
        report = verify_groupoid(elements, compose, inverse)
        if not report.ok:
            for chk in report.by_name("defined_off_G2"):
                raise StructuralError(f"malformed table at {chk.witness}: {chk.detail}")
            first = report.first_failure()
            raise AxiomError(f"not a groupoid: {first.name} fails at {first.witness}", report)
        self.name = name
        self.elements: tuple[str, ...] = tuple(elements)
        self._compose = dict(compose)
        self._inverse = dict(inverse)
        self._d = report.data["source"]
        self._r = report.data["target"]
        self.report = report
        seen = set()
        ids = []
        for g in self.elements:
            if self._d[g] == g and g not in seen:
                seen.add(g)
                ids.append(g)
        self.identities: tuple[str, ...] = tuple(ids)
        self._index = {g: i for i, g in enumerate(self.elements)}

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_group(cls, elements: Sequence[str], mul: Mapping[tuple[str, str], str], name="G") -> "Groupoid":
        ident = next(e for e in elements if all(mul[(e, g)] == g for g in elements))
        inverse = {g: next(h for h in elements if mul[(g, h)] == ident) for g in elements}
        return cls(elements, mul, inverse, name)

    @classmethod
    def transitive(
        cls,
        objects: Sequence[str],
        group: Sequence[str],
        mul: Mapping[tuple[str, str], str],
        name="G",
    ) -> "Groupoid":
        """Objects x group x objects; arrow ``(i, a, j)`` runs from j to i."""
        ident = next(e for e in group if all(mul[(e, g)] == g for g in group))
        ginv = {g: next(h for h in group if mul[(g, h)] == ident) for g in group}

        def label(i, a, j):
            return f"{i}:{a}:{j}" if len(objects) > 1 else f"{a}"

        elements, compose, inverse = [], {}, {}
        for i in objects:
            elements.append(label(i, ident, i))
        for i, a, j in product(objects, group, objects):
            if not (i == j and a == ident):
                elements.append(label(i, a, j))
        for i, a, j in product(objects, group, objects):
            inverse[label(i, a, j)] = label(j, ginv[a], i)
            for b, k in product(group, objects):
                compose[(label(i, a, j), label(j, b, k))] = label(i, mul[(a, b)], k)
        return cls(elements, compose, inverse, name)

    @classmethod
    def disjoint_union(cls, parts: Iterable["Groupoid"], name="G") -> "Groupoid":
        elements, compose, inverse = [], {}, {}
        for p in parts:
            if set(p.elements) & set(elements):
                raise StructuralError("disjoint union of groupoids with shared element ids")
            elements.extend(p.elements)
            compose.update(p._compose)
            inverse.update(p._inverse)
        return cls(elements, compose, inverse, name)

    def reordered(self, order: Sequence[str]) -> "Groupoid":
        if sorted(order) != sorted(self.elements):
            raise StructuralError("reordering must be a permutation of the elements")
        return Groupoid(order, self._compose, self._inverse, self.name)

    # -- structure -----------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._index

    def __repr__(self):
        return f"Groupoid({self.name}, |G|={len(self)}, |G0|={len(self.identities)})"

    def index(self, g: str) -> int:
        return self._index[g]

    def compose(self, g: str, h: str) -> str | None:
        return self._compose.get((g, h))

    def mul(self, g: str, h: str) -> str:
        gh = self._compose.get((g, h))
        if gh is None:
            raise StructuralError(f"{g}*{h} is undefined (d({g}) != r({h}))")
        return gh

    def inverse(self, g: str) -> str:
        return self._inverse[g]

    def d(self, g: str) -> str:
        return self._d[g]

    def r(self, g: str) -> str:
        return self._r[g]

    def is_identity(self, g: str) -> bool:
        return self._d[g] == g

    @property
    def table(self) -> dict:
        return dict(self._compose)

    def composable_pairs(self) -> list[tuple[str, str]]:
        return [(g, h) for g in self.elements for h in self.elements if self._d[g] == self._r[h]]

    def _require_identity(self, e: str):
        if e not in self._index or not self.is_identity(e):
            raise DomainError(f"{e!r} is not an identity of {self.name}")

    def isotropy(self, e: str) -> list[str]:
        """Elements of the isotropy group at ``e`` (verified to be a group)."""
        self._require_identity(e)
        grp = [g for g in self.elements if self._d[g] == e and self._r[g] == e]
        s = set(grp)
        for g, h in product(grp, repeat=2):
            if self.mul(g, h) not in s:
                raise StructuralError(f"isotropy at {e} not closed at ({g},{h})")
        for g in grp:
            if self.inverse(g) not in s or self.mul(e, g) != g:
                raise StructuralError(f"isotropy at {e} is not a group at {g}")
        return grp

    def isotropy_table(self, e: str) -> dict[tuple[str, str], str]:
        grp = self.isotropy(e)
        return {(g, h): self.mul(g, h) for g in grp for h in grp}

    def xset(self, g: str, enumeration: Mapping[str, Sequence[str]] | None = None) -> list[str]:
        """``X_g = {h : r(h) = r(g)}`` in the fixed enumeration, ``r(g)`` first."""
        e = self._r[g]
        if enumeration and e in enumeration:
            order = list(enumeration[e])
            if order[0] != e or sorted(order) != sorted(self.xset(e)):
                raise StructuralError(f"enumeration of X_{e} must be a permutation of it starting with {e}")
            return order
        return [e] + [h for h in self.elements if self._r[h] == e and h != e]

    def xset_bijection_ok(self, g: str) -> bool:
        """h -> gh maps X_{d(g)} bijectively onto X_{r(g)}."""
        src = self.xset(self._d[g])
        img = {self.mul(g, h) for h in src}
        return len(img) == len(src) and img == set(self.xset(self._r[g]))

    def to_dict(self) -> dict:
        return {
            "elements": list(self.elements),
            "compose": [[g, h, gh] for (g, h), gh in sorted(
                self._compose.items(), key=lambda kv: (self._index[kv[0][0]], self._index[kv[0][1]])
            )],
            "inverse": {g: self._inverse[g] for g in self.elements},
        }
