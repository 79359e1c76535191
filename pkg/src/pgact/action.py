"""Partial and global groupoid actions on finite-dimensional algebras."""
from __future__ import annotations

from typing import Mapping, Sequence

from .algebra import (
    Algebra,
    LinMap,
    basis_labels,
    find_unit,
    ideal_witness,
    is_central_idempotent,
    verify_ring_iso,
)
from .errors import InstanceError, InternalConsistencyError, PreconditionError, StructuralError
from .groupoid import Groupoid
from .linalg import Subspace, sum_spaces
from .report import VerificationReport


class PartialAction:
    """Arrow-by-arrow data ``(D_g, alpha_g: D_{g^-1} -> D_g)``.

    Nothing is derived from generators: every arrow carries its own ideal and
    map, and consistency between them is what :func:`verify_partial_action`
    checks.  Construction only enforces shapes.
    """

    def __init__(
        self,
        groupoid: Groupoid,
        algebra: Algebra,
        ideals: Mapping[str, Subspace],
        maps: Mapping[str, LinMap],
        name: str = "alpha",
    ):
        self.groupoid = groupoid
        self.algebra = algebra
        self.name = name
        missing = [g for g in groupoid if g not in ideals or g not in maps]
        if missing:
            raise StructuralError(f"no ideal or map given for arrow {missing[0]!r}")
        self.ideals = {g: ideals[g] for g in groupoid}
        self.maps = {g: maps[g] for g in groupoid}
        for g in groupoid:
            D = self.ideals[g]
            if D.n != algebra.dim or D.field != algebra.field:
                raise StructuralError(f"ideal D_{g} does not live in {algebra.name}")
            f = self.maps[g]
            if f.source is not algebra or f.target is not algebra:
                raise StructuralError(f"map alpha_{g} is not a map of {algebra.name}")
            if f.domain != self.ideals[groupoid.inverse(g)]:
                raise StructuralError(f"alpha_{g} is not defined on D_{groupoid.inverse(g)}")
            if f.codomain != D:
                raise StructuralError(f"alpha_{g} does not land in D_{g}")
            if not all(w in D for w in f.images):
                raise StructuralError(f"alpha_{g} has images outside D_{g}")
        self._units: dict[str, object] = {}

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_data(cls, groupoid, algebra, ideal_rows, map_images, name="alpha") -> "PartialAction":
        """Build from declared spanning rows and images of those rows.

        ``map_images[g]`` lists the images of the declared rows of
        ``D_{g^-1}``, or is the string ``"identity"``.
        """
        ideals = {}
        for g in groupoid:
            if g not in ideal_rows:
                raise InstanceError(f"no ideal declared for arrow {g!r}", field=f"action.{g}.ideal")
            ideals[g] = Subspace.span(algebra.field, algebra.dim, ideal_rows[g])
        maps = {}
        for g in groupoid:
            gi = groupoid.inverse(g)
            src = list(ideal_rows[gi])
            imgs = map_images.get(g)
            if imgs is None:
                raise InstanceError(f"no map declared for arrow {g!r}", field=f"action.{g}.map")
            if isinstance(imgs, str):
                if imgs != "identity":
                    raise InstanceError(f"unknown map shortcut {imgs!r}", field=f"action.{g}.map")
                imgs = src
            if len(imgs) != len(src):
                raise StructuralError(
                    f"alpha_{g} lists {len(imgs)} images for {len(src)} declared rows of D_{gi}"
                )
            f = LinMap.from_images(algebra, algebra, src, imgs, codomain=ideals[g])
            if f.domain != ideals[gi]:
                raise StructuralError(f"alpha_{g} is not defined on D_{gi}")
            maps[g] = f
        return cls(groupoid, algebra, ideals, maps, name)

    @classmethod
    def trivial(cls, groupoid: Groupoid, algebra: Algebra, name="alpha") -> "PartialAction":
        """Every arrow acts as the identity on the whole algebra."""
        full = Subspace.full(algebra.field, algebra.dim)
        return cls(groupoid, algebra, {g: full for g in groupoid},
                   {g: LinMap.identity(algebra, full) for g in groupoid}, name)

    # -- accessors ---------------------------------------------------------------

    @property
    def field(self):
        return self.algebra.field

    def D(self, g: str) -> Subspace:
        return self.ideals[g]

    def alpha(self, g: str) -> LinMap:
        return self.maps[g]

    def unit(self, g: str):
        """Identity element ``1_g`` of ``D_g`` or None; recomputed, never read from input."""
        if g not in self._units:
            self._units[g] = find_unit(self.algebra, self.ideals[g])
        return self._units[g]

    @property
    def units(self) -> dict:
        return {g: self.unit(g) for g in self.groupoid}

    def all_unital(self) -> bool:
        return all(self.unit(g) is not None for g in self.groupoid)

    def apply(self, g: str, x):
        """``alpha_g(x 1_{g^-1})`` for arbitrary ``x`` in R (needs unital ideals)."""
        gi = self.groupoid.inverse(g)
        u = self.unit(gi)
        if u is None:
            raise PreconditionError(f"D_{gi} has no identity element", "unital ideals", gi)
        return self.maps[g](self.algebra.mul(x, u))

    def transport(self, target: Algebra, embedding: LinMap, name=None) -> "PartialAction":
        """The same action seen on ``target`` through an injective ``embedding`` into R."""
        inv = embedding.inverse()
        ideals = {g: Subspace.span(target.field, target.dim, [inv(v) for v in D.rows])
                  for g, D in self.ideals.items()}
        maps = {}
        for g in self.groupoid:
            gi = self.groupoid.inverse(g)
            src = ideals[gi]
            imgs = [inv(self.maps[g](embedding(v))) for v in src.rows]
            maps[g] = LinMap(target, target, src, ideals[g], imgs)
        return PartialAction(self.groupoid, target, ideals, maps, name or self.name)

    def __repr__(self):
        return f"PartialAction({self.name}: {self.groupoid.name} on {self.algebra.name})"


# -- verification ----------------------------------------------------------------

def verify_partial_action(A: PartialAction) -> VerificationReport:
    """Check the action axioms, the derived identities and the ideal chain."""
    G, R = A.groupoid, A.algebra
    rep = VerificationReport(f"partial action {A.name}")
    fmt = R.fmt

    # ideal chain D_g <= D_{r(g)} <= R
    for g in G:
        Dr, Dg = A.D(G.r(g)), A.D(g)
        w = ideal_witness(R, Dr)
        if w is not None:
            rep.add("ideal_chain", False, (G.r(g), w[0], fmt(w[2])), f"D_{G.r(g)} is not an ideal of R")
            continue
        w = ideal_witness(R, Dg, Dr)
        rep.add("ideal_chain", w is None, None if w is None else (g, w[0], fmt(w[2])),
                "" if w is None else f"D_{g} is not an ideal of D_{G.r(g)}")

    for g in G:
        sub = verify_ring_iso(A.alpha(g), f"alpha_{g}")
        for c in sub.checks:
            rep.add(f"ring_iso", c.ok, None if c.ok else (g, c.name, c.witness))

    # (i) identities act trivially
    for e in G.identities:
        f = A.alpha(e)
        bad = next((v for v in f.domain.rows if f(v) != v), None)
        rep.add("axiom_i", bad is None, None if bad is None else (e, fmt(bad)))

    pairs = G.composable_pairs()
    inter = {}
    for g, h in pairs:
        gi = G.inverse(g)
        I = A.D(gi) & A.D(h)
        inter[(g, h)] = I
        ah = A.alpha(h)
        dom = ah.preimage(I)
        gh = G.mul(g, h)
        # (ii)
        target = A.D(G.inverse(gh))
        ok_ii = dom <= target
        rep.add("axiom_ii", ok_ii, None if ok_ii else (g, h))
        # (iii)
        if dom.dim == 0:
            rep.vacuous("axiom_iii", (g, h), "empty overlap")
        elif not ok_ii:
            rep.add("axiom_iii", False, (g, h), "composite defined outside the domain of alpha_gh")
        else:
            ag, agh = A.alpha(g), A.alpha(gh)
            bad = next((x for x in dom.rows if ag(ah(x)) != agh(x)), None)
            rep.add("axiom_iii", bad is None, None if bad is None else (g, h, fmt(bad)))
        # domain of the composite two ways: kernel route vs inverse image
        if ah.is_bijective():
            other = ah.inverse().image(I)
            rep.add("composite_domain", other == dom, None if other == dom else (g, h))

    # alpha_{g^-1} = alpha_g^{-1}
    for g in G:
        f, fi = A.alpha(g), A.alpha(G.inverse(g))
        if not f.is_bijective():
            rep.add("inverse_law", False, g, "alpha_g not bijective")
            continue
        inv = f.inverse()
        ok = inv.domain == fi.domain and inv.agrees_with(fi) is None
        rep.add("inverse_law", ok, None if ok else g)

    # alpha_g(D_{g^-1} n D_h) = D_g n D_{gh}
    for g, h in pairs:
        lhs = A.alpha(g).image(inter[(g, h)])
        rhs = A.D(g) & A.D(G.mul(g, h))
        rep.add("image_of_overlap", lhs == rhs, None if lhs == rhs else (g, h))

    if A.all_unital():
        for g in G:
            u = A.unit(g)
            if not is_central_idempotent(R, u):
                rep.add("central_units", False, g)
        for g, h in pairs:
            gi = G.inverse(g)
            lhs = A.alpha(g)(R.mul(A.unit(gi), A.unit(h)))
            rhs = R.mul(A.unit(g), A.unit(G.mul(g, h)))
            rep.add("unit_identity", lhs == rhs, None if lhs == rhs else (g, h))
    else:
        rep.info("unit_identity", "skipped: some D_g has no identity element")
    return rep


def is_global(A: PartialAction, cross_check: bool = True) -> bool:
    """``D_g = D_{r(g)}`` for all arrows, confirmed by full-domain composition."""
    G = A.groupoid
    by_domains = all(A.D(g) == A.D(G.r(g)) for g in G)
    if not cross_check:
        return by_domains
    by_maps = True
    for g, h in G.composable_pairs():
        comp = A.alpha(g).compose(A.alpha(h))
        full = A.alpha(G.mul(g, h))
        if comp.domain != full.domain or comp.agrees_with(full) is not None:
            by_maps = False
            break
    if by_domains != by_maps and verify_partial_action(A).ok:
        raise InternalConsistencyError("globality by domains and by compositions disagree")
    return by_domains


# -- restriction of a global action --------------------------------------------

class Restriction:
    """Result of :func:`restrict`.

    ``ambient`` is the partial action on the carrier of the global action,
    ``action`` the same data moved to ``R = prod_e D0_e`` through ``iota``.
    """

    def __init__(self, ambient: PartialAction, action: PartialAction, iota: dict[str, LinMap]):
        self.ambient = ambient
        self.action = action
        self.iota = iota


def restrict(B: PartialAction, D0: Mapping[str, Subspace], name: str = "alpha") -> Restriction:
    """Restrict a global action to ideals ``D0_e`` of ``E_e``.

    ``D_g = D0_{r(g)} n beta_g(D0_{d(g)})`` and ``alpha_g`` is ``beta_g``
    restricted; the result is also transported onto the block algebra
    ``prod_e D0_e``.
    """
    G, T = B.groupoid, B.algebra
    if not is_global(B):
        raise PreconditionError("restriction needs a global action", "global action")
    for e in G.identities:
        if e not in D0:
            raise StructuralError(f"no ideal given at identity {e}")
        w = ideal_witness(T, D0[e], B.D(e))
        if w is not None:
            raise PreconditionError(
                f"D_{e} is not an ideal of E_{e}: {w[0]} product with {T.fmt(w[2])} leaves it",
                "ideal of E_e", (e, w[0], T.fmt(w[2])),
            )
    ideals = {}
    for g in G:
        ideals[g] = D0[G.r(g)] & B.alpha(g).image(D0[G.d(g)])
    maps = {g: B.alpha(g).restrict(ideals[G.inverse(g)], ideals[g]) for g in G}
    ambient = PartialAction(G, T, ideals, maps, name)

    blocks, embs = [], []
    for e in G.identities:
        S, emb = T.subalgebra(D0[e], basis_labels(T, D0[e], f"{e}."), name=f"D_{e}")
        blocks.append(S)
        embs.append(emb)
    R, offsets = Algebra.direct_product(blocks, prefixes=list(G.identities), name="R")
    iota = {}
    for e, S, off in zip(G.identities, blocks, offsets):
        imgs = [R.basis(off + k) for k in range(S.dim)]
        block = Subspace.span(R.field, R.dim, imgs)
        iota[e] = LinMap(T, R, D0[e], block, imgs)
    r_ideals = {g: iota[G.r(g)].image(ideals[g]) for g in G}
    r_maps = {}
    for g in G:
        gi = G.inverse(g)
        src = ideals[gi]
        r_maps[g] = LinMap.from_images(
            R, R, [iota[G.d(g)](v) for v in src.rows],
            [iota[G.r(g)](B.alpha(g)(v)) for v in src.rows], codomain=r_ideals[g],
        )
    action = PartialAction(G, R, r_ideals, r_maps, name)
    return Restriction(ambient, action, iota)


def isotropy_restriction(A: PartialAction, e: str) -> tuple[PartialAction, LinMap]:
    """The partial action of the group ``G_e`` on the ring ``D_e``.

    Returns the action on a copy of ``D_e`` together with its embedding into R.
    """
    G = A.groupoid
    grp = G.isotropy(e)
    table = {(g, h): G.mul(g, h) for g in grp for h in grp}
    H = Groupoid(grp, table, {g: G.inverse(g) for g in grp}, name=f"G_{e}")
    R = A.algebra
    De = A.D(e)
    S, emb = R.subalgebra(De, basis_labels(R, De), name=f"D_{e}")
    sub = PartialAction(H, R, {g: A.D(g) for g in grp}, {g: A.alpha(g) for g in grp}, f"{A.name}_({e})")
    return sub.transport(S, emb), emb


def standing_hypotheses(A: PartialAction) -> VerificationReport:
    """Unital ideals and ``R = (+)_e D_e``, each with a witness when broken."""
    G, R = A.groupoid, A.algebra
    rep = VerificationReport("standing hypotheses")
    non_unital = [g for g in G if A.unit(g) is None]
    rep.add("unital_ideals", not non_unital, non_unital[0] if non_unital else None,
            f"D_{non_unital[0]} has no identity element" if non_unital else "")
    rep.add("finite_identities", True, None, f"|G0| = {len(G.identities)}")
    total = sum_spaces(R.field, R.dim, (A.D(e) for e in G.identities))
    dims = sum(A.D(e).dim for e in G.identities)
    if total.dim != R.dim:
        rep.add("direct_sum", False, "sum", f"R != (+) D_e: the D_e span {total.dim} of {R.dim} dimensions")
    elif dims != R.dim:
        pair = next(
            ((e, f) for i, e in enumerate(G.identities) for f in G.identities[i + 1:]
             if (A.D(e) & A.D(f)).dim),
            None,
        )
        rep.add("direct_sum", False, pair, "R != (+) D_e: the sum of the D_e is not direct")
    else:
        rep.add("direct_sum", True)
    return rep


def hypotheses_hold(A: PartialAction) -> bool:
    return standing_hypotheses(A).ok


def identity_components(A: PartialAction, x) -> dict[str, object]:
    """``x = sum_e x_e`` with ``x_e = x 1_e`` (standing hypotheses assumed)."""
    return {e: A.algebra.mul(x, A.unit(e)) for e in A.groupoid.identities}


def describe(A: PartialAction) -> dict:
    R = A.algebra
    return {
        g: {"dim": A.D(g).dim, "unit": None if A.unit(g) is None else R.fmt(A.unit(g))}
        for g in A.groupoid
    }


def declared_rows(A: PartialAction) -> dict[str, Sequence]:
    return {g: A.D(g).rows for g in A.groupoid}
