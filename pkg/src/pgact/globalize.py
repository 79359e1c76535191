"""Enveloping (global) actions of partial actions with unital ideals.

The construction materializes the ring of functions ``G -> R`` as ``|G|``
blocks of R, grows the ideals ``E_e`` inside it by subalgebra closure and then
collects them into ``T = (+)_e E_e``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .action import PartialAction, is_global, restrict, verify_partial_action
from .algebra import Algebra, Closure, LinMap, find_unit, ideal_witness, subalgebra_closure, verify_ring_iso
from .errors import InternalConsistencyError, PreconditionError, StructuralError
from .groupoid import Groupoid
from .linalg import Subspace, add, combine, scale, sub, sum_spaces
from .report import VerificationReport


def can_globalize(A: PartialAction) -> VerificationReport:
    """A globalization exists iff every ``D_g`` has an identity element.

    Raises PreconditionError when some ``D_e`` itself is not unital, since
    the criterion is only asserted under that hypothesis.
    """
    G = A.groupoid
    for e in G.identities:
        if A.unit(e) is None:
            raise PreconditionError(f"D_{e} has no identity element", "unital D_e for identities e", e)
    rep = VerificationReport(f"globalizability of {A.name}")
    bad = [g for g in G if A.unit(g) is None]
    for g in bad:
        rep.add("unital_ideal", False, g, f"D_{g} has no identity element")
    if not bad:
        rep.add("unital_ideal", True, None, "every D_g is unital")
    return rep


class FunctionRing:
    """Functions ``G -> R`` as ``|G|`` blocks of R with pointwise product."""

    def __init__(self, A: PartialAction):
        self.action = A
        G, R = A.groupoid, A.algebra
        self.groupoid = G
        self.R = R
        self.n = R.dim
        table = {}
        for b, h in enumerate(G):
            off = b * self.n
            for (i, j), terms in R.table.items():
                table[(i + off, j + off)] = {k + off: c for k, c in terms}
        labels = [f"{lab}@{h}" for h in G for lab in R.labels]
        self.algebra = Algebra(R.field, len(G) * self.n, table, labels, name="F")

    def offset(self, h: str) -> int:
        return self.groupoid.index(h) * self.n

    def value(self, f, h: str):
        """``f|_h`` as an element of R."""
        o = self.offset(h)
        return tuple(f[o:o + self.n])

    def from_values(self, values: Mapping[str, Sequence]):
        out = [self.R.field.zero] * self.algebra.dim
        for h, v in values.items():
            o = self.offset(h)
            out[o:o + self.n] = v
        return tuple(out)

    def F(self, g: str) -> Subspace:
        """Functions supported on ``X_g``."""
        G = self.groupoid
        vecs = [self.algebra.basis(self.offset(h) + i) for h in G.xset(g) for i in range(self.n)]
        return Subspace.span(self.R.field, self.algebra.dim, vecs)

    def shift(self, g: str, f):
        """``beta_g(f)|_h = f(g^-1 h)`` for ``h`` in ``X_g``, zero elsewhere."""
        G = self.groupoid
        gi = G.inverse(g)
        return self.from_values({h: self.value(f, G.mul(gi, h)) for h in G.xset(g)})

    def beta(self, g: str) -> LinMap:
        G = self.groupoid
        dom = self.F(G.inverse(g))
        return LinMap(self.algebra, self.algebra, dom, self.F(g), [self.shift(g, v) for v in dom.rows])

    def phi(self, e: str, a):
        """``phi_e(a)|_h = alpha_{h^-1}(a 1_h)`` when ``r(h) = e``."""
        A, G = self.action, self.groupoid
        return self.from_values({h: A.alpha(G.inverse(h))(self.R.mul(a, A.unit(h)))
                                 for h in G if G.r(h) == e})


@dataclass
class Globalization:
    """A global action ``beta`` on T with embeddings ``phi_e: D_e -> E_e``.

    ``logs[e]`` (when present) is the closure record that produced ``E_e``
    from the generators listed in ``generators[e]`` as ``(h, k)`` pairs: the
    k-th echelon basis vector of ``D_{d(h)}`` pushed through ``phi`` and
    ``beta_h``.
    """

    action: PartialAction
    beta: PartialAction
    phi: dict[str, LinMap]
    enumeration: dict[str, list[str]]
    logs: dict[str, Closure] = field(default_factory=dict)
    generators: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    function_ring: FunctionRing | None = None
    blocks: dict[str, LinMap] = field(default_factory=dict)

    @classmethod
    def from_parts(cls, action, beta, phi, enumeration=None) -> "Globalization":
        """Wrap an externally supplied global action and embeddings."""
        G = action.groupoid
        if beta.groupoid.elements != G.elements and sorted(beta.groupoid.elements) != sorted(G.elements):
            raise StructuralError("globalization is for a different groupoid")
        for e in G.identities:
            if e not in phi:
                raise StructuralError(f"no embedding given for D_{e}")
        enumeration = {e: G.xset(e, enumeration) for e in G.identities}
        return cls(action, beta, dict(phi), enumeration)

    @property
    def T(self) -> Algebra:
        return self.beta.algebra

    @property
    def groupoid(self) -> Groupoid:
        return self.action.groupoid

    def E(self, g: str) -> Subspace:
        return self.beta.D(g)

    def embed(self, x):
        """``x = sum_e x 1_e`` in R sent to ``sum_e phi_e(x 1_e)`` in T."""
        A = self.action
        T = self.T
        out = T.zero
        for e in self.groupoid.identities:
            out = add(out, self.phi[e](A.algebra.mul(x, A.unit(e))))
        return out

    def unit_image(self, g: str):
        """``beta_g(phi_{d(g)}(1_{d(g)}))``."""
        G = self.groupoid
        e = G.d(g)
        return self.beta.alpha(g)(self.phi[e](self.action.unit(e)))

    def idempotents(self, e: str) -> list:
        return [self.unit_image(h) for h in self.enumeration[e]]

    def boolean_unit(self, e: str):
        """Inclusion-exclusion over non-empty index sets ``i1 < ... < il``."""
        T = self.T
        p = self.idempotents(e)
        acc = T.zero
        for l in range(1, len(p) + 1):
            for idx in combinations(range(len(p)), l):
                prod = T.mul_many(*[p[i] for i in idx]) if l > 1 else p[idx[0]]
                acc = add(acc, prod) if l % 2 else sub(acc, prod)
        return acc

    def v(self, e: str) -> list:
        """Orthogonal idempotents ``v_{1,e}, ..., v_{n_e,e}`` summing to ``1'_e``."""
        T = self.T
        p = self.idempotents(e)
        one = self.boolean_unit(e)
        out = [p[0]]
        for j in range(1, len(p)):
            w = p[j]
            for i in range(j):
                w = T.mul(sub(one, p[i]), w)
            out.append(w)
        return out

    def generator_vectors(self, e: str) -> tuple[list, list]:
        """``beta_h(phi_{d(h)}(b_k))`` for h in ``X_e``, with their tags."""
        G, A = self.groupoid, self.action
        vecs, tags = [], []
        for h in self.enumeration[e]:
            D = A.D(G.d(h))
            f = self.phi[G.d(h)]
            bh = self.beta.alpha(h)
            for k, b in enumerate(D.rows):
                vecs.append(bh(f(b)))
                tags.append((h, k))
        return vecs, tags

    def dims(self) -> dict:
        return {"T": self.T.dim, **{f"E_{g}": self.E(g).dim for g in self.groupoid}}


def build_globalization(A: PartialAction, enumeration: Mapping[str, Sequence[str]] | None = None,
                        check: bool = True) -> Globalization:
    rep = can_globalize(A)
    if not rep.ok:
        g = rep.first_failure().witness
        raise PreconditionError(f"no globalization: D_{g} has no identity element", "unital ideals", g)
    G, R = A.groupoid, A.algebra
    FR = FunctionRing(A)
    F = FR.algebra
    enum = {e: G.xset(e, enumeration) for e in G.identities}

    # E_e inside F, by closure of the translated embedded ideals
    closures, gens_tags, E_F = {}, {}, {}
    phiF = {e: [FR.phi(e, b) for b in A.D(e).rows] for e in G.identities}
    for e in G.identities:
        vecs, tags = [], []
        for h in enum[e]:
            for k, v in enumerate(phiF[G.d(h)]):
                vecs.append(FR.shift(h, v))
                tags.append((h, k))
        cl = subalgebra_closure(F, vecs)
        plain = Subspace.span(F.field, F.dim, vecs)
        if cl.space != plain:
            raise InternalConsistencyError(f"closure generating E_{e} is larger than the sum of the generators")
        closures[e], gens_tags[e], E_F[e] = cl, tags, cl.space

    # T = (+)_e E_e as a standalone algebra
    subs, embs = [], []
    count = 0
    for e in G.identities:
        labels = [f"t{count + k + 1}" for k in range(E_F[e].dim)]
        count += E_F[e].dim
        S, emb = F.subalgebra(E_F[e], labels, name=f"E_{e}")
        subs.append(S)
        embs.append(emb)
    T, offsets = Algebra.direct_product(subs, prefixes=list(G.identities), name="T")
    to_T: dict[str, LinMap] = {}
    for e, S, off in zip(G.identities, subs, offsets):
        imgs = [T.basis(off + k) for k in range(S.dim)]
        to_T[e] = LinMap(F, T, E_F[e], Subspace.span(T.field, T.dim, imgs), imgs)
    E_T = {e: to_T[e].codomain for e in G.identities}

    # beta on T
    maps = {}
    for g in G:
        d, r = G.d(g), G.r(g)
        back = to_T[d].inverse()
        dom = E_T[d]
        imgs = [to_T[r](FR.shift(g, back(v))) for v in dom.rows]
        maps[g] = LinMap(T, T, dom, E_T[r], imgs)
    beta = PartialAction(G, T, {g: E_T[G.r(g)] for g in G}, maps, name="beta")

    phi = {}
    for e in G.identities:
        D = A.D(e)
        phi[e] = LinMap(R, T, D, E_T[e], [to_T[e](v) for v in phiF[e]])

    # closure logs re-expressed in T
    logs = {}
    for e in G.identities:
        cl = closures[e]
        logs[e] = Closure(
            to_T[e].image(cl.space) if cl.space.dim else Subspace.zero(T.field, T.dim),
            [to_T[e](v) for v in cl.vectors], cl.exprs, [to_T[e](v) for v in cl.generators],
        )
    Gl = Globalization(A, beta, phi, enum, logs, gens_tags, FR, to_T)
    if check:
        rep = verify_globalization(Gl)
        if not rep.ok:
            bad = rep.first_failure()
            raise InternalConsistencyError(f"constructed globalization fails {bad.name} at {bad.witness}")
    return Gl


def verify_globalization(Gl: Globalization) -> VerificationReport:
    """The four defining properties plus globality and the unit formula."""
    A, beta, T = Gl.action, Gl.beta, Gl.T
    G, R = A.groupoid, A.algebra
    rep = VerificationReport("globalization")
    brep = verify_partial_action(beta)
    rep.add("beta_is_action", brep.ok, None if brep.ok else brep.first_failure().name)
    rep.add("beta_global", brep.ok and is_global(beta))

    img = {}
    for e in G.identities:
        f = Gl.phi[e]
        if f.domain != A.D(e):
            rep.add("phi_domain", False, e)
            return rep
        ok = verify_ring_iso(LinMap(R, T, f.domain, f.image(), f.images), f"phi_{e}").ok
        rep.add("phi_monomorphism", ok, None if ok else e)
        img[e] = f.image()
        w = ideal_witness(T, img[e], Gl.E(e))
        rep.add("ideal", w is None, None if w is None else (e, w[0], T.fmt(w[2])))

    for g in G:
        d, r = G.d(g), G.r(g)
        lhs = Gl.phi[r].image(A.D(g))
        rhs = img[r] & beta.alpha(g).image(img[d])
        rep.add("intersection", lhs == rhs, None if lhs == rhs else g)
        bad = next((x for x in A.D(G.inverse(g)).rows
                    if beta.alpha(g)(Gl.phi[d](x)) != Gl.phi[r](A.alpha(g)(x))), None)
        rep.add("intertwining", bad is None, None if bad is None else (g, R.fmt(bad)))
        span = sum_spaces(T.field, T.dim, (beta.alpha(h).image(img[G.d(h)]) for h in G.xset(g)))
        rep.add("generated", span == Gl.E(g), None if span == Gl.E(g) else g)

    for e in G.identities:
        one = find_unit(T, Gl.E(e))
        boolean = Gl.boolean_unit(e)
        rep.add("boolean_unit", one is not None and one == boolean, None if one == boolean else e)
        vs = Gl.v(e)
        ok = all(T.mul(v, v) == v for v in vs) and all(
            not any(T.mul(vs[i], vs[j])) for i in range(len(vs)) for j in range(len(vs)) if i != j
        )
        total = T.zero
        for v in vs:
            total = add(total, v)
        rep.add("orthogonal_decomposition", ok and total == boolean, None if ok and total == boolean else e)
    return rep


def restriction_roundtrip(Gl: Globalization) -> VerificationReport:
    """Restrict beta to the embedded ideals and compare with the original action."""
    A, beta = Gl.action, Gl.beta
    G, R = A.groupoid, A.algebra
    D0 = {e: Gl.phi[e].image() for e in G.identities}
    res = restrict(beta, D0)
    rep = VerificationReport("restriction round trip")
    for g in G:
        r = G.r(g)
        same = Gl.phi[r].image(A.D(g)) == res.ambient.D(g)
        rep.add("ideal", same, None if same else g)
        bad = next((x for x in A.D(G.inverse(g)).rows
                    if res.ambient.alpha(g)(Gl.phi[G.d(g)](x)) != Gl.phi[r](A.alpha(g)(x))), None)
        rep.add("map", bad is None, None if bad is None else (g, R.fmt(bad)))
    vrep = verify_partial_action(res.action)
    rep.add("restriction_is_action", vrep.ok)
    return rep


@dataclass
class Equivalence:
    status: str  # "equivalent", "failed" or "cannot certify"
    maps: dict[str, LinMap]
    report: VerificationReport

    @property
    def ok(self) -> bool:
        return self.status == "equivalent"


def equivalence(target: Globalization, source: Globalization) -> Equivalence:
    """Maps ``eta_e: E'_e -> E_e`` from ``source`` (primed) to ``target``.

    Each ``eta_e`` sends ``sum beta'_h(phi'_{d(h)}(a))`` to
    ``sum beta_h(phi_{d(h)}(a))``.  When the source carries a closure record
    the images are obtained by replaying it; otherwise the generators must
    already span ``E'_e`` and the map is obtained from them directly.
    """
    A = target.action
    G = A.groupoid
    rep = VerificationReport("equivalence of globalizations")
    T1, T2 = target.T, source.T
    etas: dict[str, LinMap] = {}
    for e in G.identities:
        enum = source.enumeration[e]
        vec1, vec2 = [], []
        for h in enum:
            D = A.D(G.d(h))
            for b in D.rows:
                vec1.append(target.beta.alpha(h)(target.phi[G.d(h)](b)))
                vec2.append(source.beta.alpha(h)(source.phi[G.d(h)](b)))
        log = source.logs.get(e)
        if log is not None and log.generators == vec2:
            srcs = log.vectors
            imgs = log.evaluate(vec1, T1.mul)
        else:
            if Subspace.span(T2.field, T2.dim, vec2) != source.E(e):
                rep.info("decomposition", f"E'_{e} is not spanned by its generators; cannot certify", e)
                return Equivalence("cannot certify", etas, rep)
            srcs, imgs = vec2, vec1
        try:
            eta = LinMap.from_images(T2, T1, srcs, imgs, codomain=target.E(e))
        except StructuralError:
            rep.add("well_defined", False, e)
            return Equivalence("failed", etas, rep)
        rep.add("well_defined", True, e)
        ok_dom = eta.domain == source.E(e)
        rep.add("defined_on_E", ok_dom, None if ok_dom else e)
        iso = verify_ring_iso(eta, f"eta_{e}")
        rep.extend(iso, f"eta_{e}.")
        etas[e] = eta
    if rep.ok:
        for g in G:
            d, r = G.d(g), G.r(g)
            bad = next((a for a in source.E(d).rows
                        if target.beta.alpha(g)(etas[d](a)) != etas[r](source.beta.alpha(g)(a))), None)
            rep.add("intertwines", bad is None, None if bad is None else (g, T2.fmt(bad)))
    return Equivalence("equivalent" if rep.ok else "failed", etas, rep)
