"""Partial skew groupoid rings, their corners and the associated Morita context."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .action import PartialAction
from .algebra import Algebra, LinMap
from .errors import InternalConsistencyError, PreconditionError, StructuralError
from .linalg import EchelonBuilder, Subspace, add
from .report import VerificationReport


class SkewRing:
    """``(+)_g D_g delta_g`` with ``(x delta_g)(y delta_h) = alpha_g(alpha_{g^-1}(x) y) delta_{gh}``.

    The basis is ``(g, k)``: the k-th echelon basis vector of ``D_g`` in the
    slot of ``g``.  The carrier is an ordinary :class:`Algebra` so that all
    generic tools apply to it.
    """

    def __init__(self, action: PartialAction, check: bool = True):
        self.action = action
        A, G, R = action, action.groupoid, action.algebra
        self.groupoid = G
        self.R = R
        self.offsets: dict[str, int] = {}
        labels, slots = [], []
        off = 0
        for g in G:
            self.offsets[g] = off
            for k, row in enumerate(A.D(g).rows):
                nz = [i for i, a in enumerate(row) if a]
                base = R.labels[nz[0]] if len(nz) == 1 and row[nz[0]] == R.field.one else f"u{k + 1}"
                labels.append(f"{base}|{g}")
                slots.append((g, k))
            off += A.D(g).dim
        self.slots = slots
        table = {}
        for g in G:
            ag, agi = A.alpha(g), A.alpha(G.inverse(g))
            Dgi = A.D(G.inverse(g))
            for h in G:
                gh = G.compose(g, h)
                if gh is None:
                    continue
                Dgh = A.D(gh)
                for i, x in enumerate(A.D(g).rows):
                    xi = agi(x)
                    for j, y in enumerate(A.D(h).rows):
                        p = R.mul(xi, y)
                        if not any(p):
                            continue
                        if p not in Dgi:
                            raise StructuralError(f"product for ({g},{h}) leaves D_{G.inverse(g)}")
                        z = ag(p)
                        try:
                            c = Dgh.coords(z)
                        except ValueError:
                            raise StructuralError(f"product for ({g},{h}) leaves D_{gh}") from None
                        terms = {self.offsets[gh] + k: a for k, a in enumerate(c) if a}
                        if terms:
                            table[(self.offsets[g] + i, self.offsets[h] + j)] = terms
        self.algebra = Algebra(R.field, off, table, labels, name=f"R*{G.name}")
        if check:
            w = self.algebra.associativity_witness()
            if w is not None:
                raise InternalConsistencyError(
                    f"skew ring is not associative at {tuple(self.algebra.labels[i] for i in w)}"
                )
            u = self.unit
            bad = next((i for i in range(off) if self.algebra.mul(u, self.algebra.basis(i)) != self.algebra.basis(i)
                        or self.algebra.mul(self.algebra.basis(i), u) != self.algebra.basis(i)), None)
            if bad is not None:
                raise InternalConsistencyError(f"sum of 1_e delta_e is not an identity (at {labels[bad]})")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def elem(self, g: str, x) -> tuple:
        """``x delta_g`` for ``x`` in ``D_g``."""
        D = self.action.D(g)
        try:
            c = D.coords(x)
        except ValueError:
            raise StructuralError(f"element is not in D_{g}") from None
        out = [self.R.field.zero] * self.dim
        o = self.offsets[g]
        out[o:o + len(c)] = c
        return tuple(out)

    def from_components(self, comps: dict) -> tuple:
        out = self.algebra.zero
        for g, x in comps.items():
            out = add(out, self.elem(g, x))
        return out

    def component(self, v, g: str):
        """The coefficient of ``delta_g`` as an element of R."""
        D = self.action.D(g)
        o = self.offsets[g]
        return D.from_coords(v[o:o + D.dim])

    def components(self, v) -> dict:
        return {g: self.component(v, g) for g in self.groupoid}

    def graded(self, g: str) -> Subspace:
        """The slot ``D_g delta_g`` as a subspace of the carrier."""
        o = self.offsets[g]
        return Subspace.span(self.R.field, self.dim,
                             [self.algebra.basis(o + k) for k in range(self.action.D(g).dim)])

    def slot_of(self, index: int) -> str:
        return self.slots[index][0]

    @property
    def unit(self):
        """``sum_e 1_e delta_e``."""
        A = self.action
        return self.from_components({e: A.unit(e) for e in self.groupoid.identities})

    @property
    def t(self):
        """``sum_g 1_g delta_g``."""
        A = self.action
        return self.from_components({g: A.unit(g) for g in self.groupoid})

    def embed(self, x):
        """``x -> sum_e x 1_e delta_e``: R inside the skew ring."""
        A, R = self.action, self.R
        return self.from_components({e: R.mul(x, A.unit(e)) for e in self.groupoid.identities})

    def mul(self, u, v):
        return self.algebra.mul(u, v)

    def fmt(self, v) -> str:
        parts = []
        for g in self.groupoid:
            c = self.component(v, g)
            if any(c):
                parts.append(f"({self.R.fmt(c)})d[{g}]")
        return " + ".join(parts) if parts else "0"

    def verify(self) -> VerificationReport:
        rep = VerificationReport(f"skew ring {self.algebra.name}")
        w = self.algebra.associativity_witness()
        rep.add("associativity", w is None, None if w is None else tuple(self.algebra.labels[i] for i in w))
        u = self.unit
        bad = next((i for i in range(self.dim) if self.mul(u, self.algebra.basis(i)) != self.algebra.basis(i)
                    or self.mul(self.algebra.basis(i), u) != self.algebra.basis(i)), None)
        rep.add("identity", bad is None, None if bad is None else self.algebra.labels[bad])
        total = sum(self.action.D(g).dim for g in self.groupoid)
        rep.add("dimension", total == self.dim, None, f"dim = {self.dim}")
        return rep


def graded_span(ring: SkewRing, left: Iterable, right: Iterable, limit: dict[str, int] | None = None) -> Subspace:
    """Span of all products ``u v``.

    ``limit`` gives an upper bound per graded slot; once the span reaches
    their total the remaining products are skipped.
    """
    R = ring.R
    cap = ring.dim if limit is None else min(ring.dim, sum(limit.get(g, 0) for g in ring.groupoid))
    b = EchelonBuilder(R.field, ring.dim)
    right = list(right)
    for u in left:
        for v in right:
            if b.dim >= cap:
                return b.subspace()
            p = ring.mul(u, v)
            if any(p):
                b.add(p)
    return b.subspace()


def _homogeneous_span(ring: SkewRing, spaces: dict) -> Subspace:
    """``{sum_g c_g delta_g : c_g in spaces[g]}``."""
    rows = []
    for g, S in spaces.items():
        for c in S.rows:
            rows.append(ring.elem(g, c))
    return Subspace.span(ring.R.field, ring.dim, rows)


@dataclass
class Corners:
    B1A: Subspace
    AB: Subspace  # 1_A B
    ABA: Subspace  # 1_A B 1_A
    BAB: Subspace  # B 1_A B
    embedding: LinMap  # the copy of A inside B
    report: VerificationReport


def embed_skew(Gl, A_ring: SkewRing, B_ring: SkewRing) -> LinMap:
    """``x delta_g -> phi_{r(g)}(x) delta_g`` from ``R * G`` into ``T * G``."""
    G = Gl.groupoid
    imgs = []
    for g, k in A_ring.slots:
        x = Gl.action.D(g).rows[k]
        imgs.append(B_ring.elem(g, Gl.phi[G.r(g)](x)))
    full = Subspace.full(A_ring.R.field, A_ring.dim)
    return LinMap(A_ring.algebra, B_ring.algebra, full, Subspace.span(A_ring.R.field, B_ring.dim, imgs), imgs)


def _unit_of(ring: SkewRing):
    """``sum_e 1_e delta_e`` if it is an identity for the carrier, else None."""
    u = ring.unit
    for i in range(ring.dim):
        b = ring.algebra.basis(i)
        if ring.mul(u, b) != b or ring.mul(b, u) != b:
            return None
    return u


def corners(Gl, A_ring: SkewRing | None = None, B_ring: SkewRing | None = None) -> Corners:
    """The four corner subspaces of ``B = T * G`` cut out by ``1_A``."""
    A_ring = A_ring or SkewRing(Gl.action)
    B_ring = B_ring or SkewRing(Gl.beta)
    if _unit_of(B_ring) is None:
        raise PreconditionError("T * G is not unital", "B unital")
    G = Gl.groupoid
    alpha, beta = Gl.action, Gl.beta
    emb = embed_skew(Gl, A_ring, B_ring)
    oneA = emb(A_ring.unit)
    Bb = [B_ring.algebra.basis(i) for i in range(B_ring.dim)]
    F = B_ring.R.field
    B1A = Subspace.span(F, B_ring.dim, [B_ring.mul(b, oneA) for b in Bb])
    AB = Subspace.span(F, B_ring.dim, [B_ring.mul(oneA, b) for b in Bb])
    ABA = Subspace.span(F, B_ring.dim, [B_ring.mul(B_ring.mul(oneA, b), oneA) for b in Bb])
    BAB = graded_span(B_ring, B1A.rows, AB.rows, {g: beta.D(g).dim for g in G})
    rep = VerificationReport("corners")
    exp_i = _homogeneous_span(B_ring, {g: beta.alpha(g).image(Gl.phi[G.d(g)].image()) for g in G})
    exp_ii = _homogeneous_span(B_ring, {g: Gl.phi[G.r(g)].image() & beta.D(g) for g in G})
    rep.add("right_corner", B1A == exp_i, None, f"dim B1_A = {B1A.dim}")
    rep.add("left_corner", AB == exp_ii, None, f"dim 1_AB = {AB.dim}")
    rep.add("two_sided_corner", ABA == emb.codomain, None, f"dim 1_AB1_A = {ABA.dim}, dim A = {A_ring.dim}")
    full = Subspace.full(F, B_ring.dim)
    rep.add("full_ideal", BAB == full, None, f"dim B1_AB = {BAB.dim}, dim B = {B_ring.dim}")
    rep.data.update(dims={"B1A": B1A.dim, "1AB": AB.dim, "1AB1A": ABA.dim, "B1AB": BAB.dim,
                          "A": A_ring.dim, "B": B_ring.dim})
    return Corners(B1A, AB, ABA, BAB, emb, rep)


@dataclass
class MoritaContext:
    """Rings, bimodules (as subspaces of a common carrier) and pairing images."""

    ring: Subspace
    other: Subspace
    M: Subspace
    N: Subspace
    tau_image: Subspace
    tau_prime_image: Subspace
    report: VerificationReport = field(default_factory=lambda: VerificationReport("Morita context"))

    @property
    def tau_surjective(self) -> bool:
        return self.tau_image == self.ring

    @property
    def tau_prime_surjective(self) -> bool:
        return self.tau_prime_image == self.other

    @property
    def strict(self) -> bool:
        return self.tau_surjective and self.tau_prime_surjective


def morita_context_global(Gl, cor: Corners | None = None,
                          A_ring: SkewRing | None = None, B_ring: SkewRing | None = None) -> MoritaContext:
    """``(A, B, 1_AB, B1_A, mn, nm)`` with surjectivity decided by spans."""
    A_ring = A_ring or SkewRing(Gl.action)
    B_ring = B_ring or SkewRing(Gl.beta)
    cor = cor or corners(Gl, A_ring, B_ring)
    G = Gl.groupoid
    tau = graded_span(B_ring, cor.AB.rows, cor.B1A.rows)
    tau_p = graded_span(B_ring, cor.B1A.rows, cor.AB.rows, {g: Gl.beta.D(g).dim for g in G})
    full = Subspace.full(B_ring.R.field, B_ring.dim)
    ctx = MoritaContext(cor.ABA, full, cor.AB, cor.B1A, tau, tau_p)
    ctx.report.add("tau_surjective", ctx.tau_surjective, None, f"dim image {tau.dim} of {cor.ABA.dim}")
    ctx.report.add("tau_prime_surjective", ctx.tau_prime_surjective, None, f"dim image {tau_p.dim} of {B_ring.dim}")
    ctx.report.data["strict"] = ctx.strict
    return ctx
