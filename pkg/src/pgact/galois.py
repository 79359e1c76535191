"""Invariants, trace, the invariant-ring isomorphism and Galois coordinate systems."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Mapping, Sequence

from .action import PartialAction, isotropy_restriction, standing_hypotheses
from .algebra import LinMap, inverse_in, verify_ring_iso
from .errors import InternalConsistencyError, PreconditionError
from .groupoid import Groupoid
from .linalg import Subspace, add, combine, left_kernel, solve_left, sub, sum_spaces
from .report import VerificationReport

GaloisSystem = list  # list of (x_i, y_i) pairs of elements of R


def _require_units(A: PartialAction):
    for g in A.groupoid:
        if A.unit(g) is None:
            raise PreconditionError(f"D_{g} has no identity element", "unital ideals", g)


def invariants(A: PartialAction) -> Subspace:
    """``{x : alpha_g(x 1_{g^-1}) = x 1_g for all g}``."""
    _require_units(A)
    R, G = A.algebra, A.groupoid
    rows = []
    for i in range(R.dim):
        b = R.basis(i)
        row = []
        for g in G:
            row.extend(sub(A.apply(g, b), R.mul(b, A.unit(g))))
        rows.append(tuple(row))
    ker = left_kernel(R.field, rows, len(rows[0]) if rows else 0)
    return Subspace.span(R.field, R.dim, ker)


def isotropy_invariants(A: PartialAction) -> Subspace:
    """``(+)_e D_e^{alpha_(e)}``, which always contains the invariants."""
    R = A.algebra
    parts = []
    for e in A.groupoid.identities:
        sub_action, emb = isotropy_restriction(A, e)
        parts.append(emb.image(invariants(sub_action)))
    return sum_spaces(R.field, R.dim, parts)


def trace(A: PartialAction, x) -> tuple:
    """``t(x) = sum_g alpha_g(x 1_{g^-1})``."""
    _require_units(A)
    out = A.algebra.zero
    for g in A.groupoid:
        out = add(out, A.apply(g, x))
    return out


def trace_image(A: PartialAction) -> Subspace:
    R = A.algebra
    return Subspace.span(R.field, R.dim, [trace(A, R.basis(i)) for i in range(R.dim)])


def trace_report(A: PartialAction) -> VerificationReport:
    """Trace identities, with the standing hypotheses recorded alongside.

    Failures are expected (and tagged) when the hypotheses do not hold.
    """
    R, G = A.algebra, A.groupoid
    hyp = standing_hypotheses(A)
    rep = VerificationReport("trace")
    rep.extend(hyp, "hypothesis.")
    Ra = invariants(A)
    bad = next((R.basis(i) for i in range(R.dim) if trace(A, R.basis(i)) not in Ra), None)
    rep.add("image_in_invariants", bad is None,
            None if bad is None else (R.fmt(bad), R.fmt(trace(A, bad))))
    bad = None
    for g in G:
        for x in A.D(G.inverse(g)).rows:
            if trace(A, A.alpha(g)(x)) != trace(A, x):
                bad = (g, R.fmt(x))
                break
        if bad:
            break
    rep.add("invariant_under_arrows", bad is None, bad)
    bad = None
    for r in Ra.rows:
        for s in Ra.rows:
            for i in range(R.dim):
                x = R.basis(i)
                if trace(A, R.mul_many(r, x, s)) != R.mul_many(r, trace(A, x), s):
                    bad = (R.fmt(r), R.labels[i], R.fmt(s))
                    break
            if bad:
                break
        if bad:
            break
    rep.add("bimodule_map", bad is None, bad)
    rep.data["hypotheses_hold"] = hyp.ok
    return rep


def isotropy_trace(A: PartialAction, e: str, x) -> tuple:
    """``t_{alpha_(e)}(x)`` for ``x`` in ``D_e``: the sum over ``G_e`` only."""
    out = A.algebra.zero
    for g in A.groupoid.isotropy(e):
        out = add(out, A.apply(g, x))
    return out


def restricted_traces_agree(A: PartialAction, e: str):
    """None when ``t`` and ``t_{alpha_(e)}`` agree on a basis of ``D_e``, else the first witness."""
    for x in A.D(e).rows:
        if trace(A, x) != isotropy_trace(A, e, x):
            return x
    return None


# -- the invariant-ring isomorphism --------------------------------------------------

def _component(Gl, a, e):
    return Gl.T.mul(a, Gl.boolean_unit(e))


def psi_component(Gl, e: str, a, formula: str = "orthogonal") -> tuple:
    """``psi_e(a)`` by the orthogonal decomposition or by inclusion-exclusion."""
    T, G = Gl.T, Gl.groupoid
    enum = Gl.enumeration[e]
    terms = [Gl.beta.alpha(h)(_component(Gl, a, G.d(h))) for h in enum]
    out = T.zero
    if formula == "orthogonal":
        for w, v in zip(terms, Gl.v(e)):
            out = add(out, T.mul(w, v))
        return out
    p = Gl.idempotents(e)
    for l in range(1, len(enum) + 1):
        for idx in combinations(range(len(enum)), l):
            prod = T.mul_many(*[p[i] for i in idx], terms[idx[-1]])
            out = add(out, prod) if l % 2 else sub(out, prod)
    return out


def psi(Gl, a, formula: str = "orthogonal") -> tuple:
    out = Gl.T.zero
    for e in Gl.groupoid.identities:
        out = add(out, psi_component(Gl, e, a, formula))
    return out


@dataclass
class InvariantIso:
    forward: LinMap  # R^alpha -> T^beta
    inverse: LinMap  # T^beta -> R^alpha
    report: VerificationReport


def invariants_iso(Gl) -> InvariantIso:
    """``psi`` restricted to the invariants, with inverse "multiply by 1_R"."""
    A, T = Gl.action, Gl.T
    R, G = A.algebra, A.groupoid
    rep = VerificationReport("invariant rings")
    Ra = invariants(A)
    Tb = invariants(Gl.beta)
    rep.data.update(dim_R_alpha=Ra.dim, dim_T_beta=Tb.dim)
    emb = _embedding(Gl)
    rep.add("embedding_injective", emb.is_injective())
    images = []
    for x in Ra.rows:
        ex = emb(x)
        a = psi(Gl, ex)
        b = psi(Gl, ex, "boolean")
        rep.add("psi_formulas_agree", a == b, None if a == b else R.fmt(x))
        for g in G:
            lhs = Gl.beta.alpha(g)(psi_component(Gl, G.d(g), ex))
            rhs = psi_component(Gl, G.r(g), ex)
            if lhs != rhs:
                rep.add("psi_equivariant", False, (g, R.fmt(x)))
        images.append(a)
    if not rep.by_name("psi_equivariant"):
        rep.add("psi_equivariant", True)
    fwd = LinMap(R, T, Ra, Tb, images)
    inside = all(v in Tb for v in images)
    rep.add("lands_in_T_beta", inside)
    rep.extend(verify_ring_iso(fwd, "psi"), "psi.")
    one_R = emb(R.unit) if R.unit is not None else Gl.embed(_sum_units(A))
    back_imgs = []
    ok_back = True
    emb_inv = emb.inverse() if emb.is_injective() else None
    for b in Tb.rows:
        y = T.mul(b, one_R)
        if emb_inv is None or y not in emb.codomain:
            ok_back = False
            back_imgs.append(R.zero)
            continue
        back_imgs.append(emb_inv(y))
    inv = LinMap(T, R, Tb, Ra, back_imgs)
    rep.add("inverse_lands_in_R_alpha", ok_back and all(v in Ra for v in back_imgs))
    ok = ok_back and all(inv(fwd(x)) == x for x in Ra.rows) and all(fwd(inv(b)) == b for b in Tb.rows)
    rep.add("inverse_is_multiplication_by_1R", ok)
    return InvariantIso(fwd, inv, rep)


def _embedding(Gl) -> LinMap:
    """R inside T, as a map onto its image."""
    R, T = Gl.action.algebra, Gl.T
    imgs = [Gl.embed(R.basis(i)) for i in range(R.dim)]
    return LinMap(R, T, Subspace.full(R.field, R.dim), Subspace.span(T.field, T.dim, imgs), imgs)


def _sum_units(A: PartialAction):
    out = A.algebra.zero
    for e in A.groupoid.identities:
        out = add(out, A.unit(e))
    return out


# -- Galois coordinate systems -----------------------------------------------------

def galois_target(A: PartialAction, g: str):
    """``1_g`` for identities, zero for the other arrows."""
    return A.unit(g) if A.groupoid.is_identity(g) else A.algebra.zero


def verify_galois(A: PartialAction, system: Sequence) -> VerificationReport:
    """``sum_i x_i alpha_g(y_i 1_{g^-1})`` must equal ``1_g`` on identities and 0 elsewhere."""
    _require_units(A)
    R = A.algebra
    rep = VerificationReport("Galois coordinate system")
    for g in A.groupoid:
        total = R.zero
        for x, y in system:
            total = add(total, R.mul(x, A.apply(g, y)))
        want = galois_target(A, g)
        rep.add("galois_identity", total == want, None if total == want else g,
                "" if total == want else f"sum is {R.fmt(total)}, expected {R.fmt(want)}")
    return rep


def find_galois(A: PartialAction) -> GaloisSystem | None:
    """A system with ``x_i`` the basis of R, by a single linear solve, or None.

    Any system can be regrouped so that its first entries run over a basis,
    so None is a proof that no system exists.
    """
    _require_units(A)
    R, G = A.algebra, A.groupoid
    n = R.dim
    act = {g: [A.apply(g, R.basis(j)) for j in range(n)] for g in G}
    rows = []
    for i in range(n):
        bi = R.basis(i)
        for j in range(n):
            row = []
            for g in G:
                row.extend(R.mul(bi, act[g][j]))
            rows.append(tuple(row))
    target = []
    for g in G:
        target.extend(galois_target(A, g))
    sol = solve_left(R.field, rows, tuple(target))
    if sol is None:
        return None
    system = []
    for i in range(n):
        y = tuple(sol[i * n:(i + 1) * n])
        if any(y):
            system.append((R.basis(i), y))
    if not verify_galois(A, system).ok:
        raise InternalConsistencyError("solved Galois system does not verify")
    return system


# -- transfer between an action and its globalization ------------------------------

def enumeration_condition(G: Groupoid, enumeration: Mapping[str, Sequence[str]] | None = None):
    """``(True, None)`` if ``g_{j,r(l)}^-1 l g_{j,d(l)}`` is never an identity for
    a non-identity ``l``; otherwise ``(False, (l, j))`` with ``j`` 1-based."""
    xs = {e: G.xset(e, enumeration) for e in G.identities}
    for l in G:
        if G.is_identity(l):
            continue
        top, bottom = xs[G.r(l)], xs[G.d(l)]
        for j, (a, b) in enumerate(zip(top, bottom), start=1):
            if G.is_identity(G.mul(G.mul(G.inverse(a), l), b)):
                return False, (l, j)
    return True, None


def all_enumerations(G: Groupoid):
    """Every enumeration of the sets ``X_e`` that starts with ``e``."""
    per = []
    for e in G.identities:
        rest = G.xset(e)[1:]
        per.append([(e, [e, *p]) for p in permutations(rest)])
    for combo in product(*per):
        yield dict(combo)


def enumeration_condition_all(G: Groupoid) -> list[tuple[dict, bool, object]]:
    return [(en, *enumeration_condition(G, en)) for en in all_enumerations(G)]


def transfer_to_global(Gl, system: Sequence) -> GaloisSystem:
    """Build ``a_{i,j}, b_{i,j}`` on T from a partial system on R."""
    G = Gl.groupoid
    ok, wit = enumeration_condition(G, Gl.enumeration)
    if not ok:
        raise PreconditionError(
            f"groupoid condition fails for l={wit[0]}, j={wit[1]}", "enumeration condition", wit
        )
    A, T = Gl.action, Gl.T
    R = A.algebra
    vs = {e: Gl.v(e) for e in G.identities}
    width = max(len(Gl.enumeration[e]) for e in G.identities)
    out = []
    for x, y in system:
        for j in range(width):
            a, b = T.zero, T.zero
            for e in G.identities:
                enum = Gl.enumeration[e]
                if j >= len(enum):
                    continue
                h = enum[j]
                d = G.d(h)
                xd = Gl.phi[d](R.mul(x, A.unit(d)))
                yd = Gl.phi[d](R.mul(y, A.unit(d)))
                a = add(a, T.mul(Gl.beta.alpha(h)(xd), vs[e][j]))
                b = add(b, T.mul(Gl.beta.alpha(h)(yd), vs[e][j]))
            if any(a) or any(b):
                out.append((a, b))
    return out


def transfer_to_partial(Gl, system: Sequence) -> GaloisSystem:
    """``x_i = a_i 1_R``, ``y_i = b_i 1_R`` read back in R."""
    A, T = Gl.action, Gl.T
    R = A.algebra
    back = _embedding(Gl).inverse()
    one = Gl.embed(_sum_units(A))
    return [(back(T.mul(a, one)), back(T.mul(b, one))) for a, b in system]


# -- Galois characterization ----------------------------------------------------------

@dataclass
class Module:
    """A finite left module over a skew ring: one matrix per carrier basis vector.

    ``action[k][p][q]`` is the p-th coordinate of ``basis_k . m_q``.
    """

    dim: int
    action: list
    name: str = "M"

    def act(self, ring, u, m):
        out = [ring.R.field.zero] * self.dim
        for k, c in enumerate(u):
            if not c:
                continue
            mat = self.action[k]
            for q, mq in enumerate(m):
                if mq:
                    for p in range(self.dim):
                        if mat[p][q]:
                            out[p] += c * mat[p][q] * mq
        return tuple(out)


def function_module(A: PartialAction, ring) -> Module:
    """``{f: G -> R, f(g) in D_g}`` with the twisted left action."""
    G, R = A.groupoid, A.algebra
    F = R.field
    offs, off = {}, 0
    for g in G:
        offs[g] = off
        off += A.D(g).dim
    dim = off
    mats = []
    for g, k in ring.slots:
        a = A.D(g).rows[k]
        mat = [[F.zero] * dim for _ in range(dim)]
        for h in G:
            for q, fh in enumerate(A.D(h).rows):
                col = offs[h] + q
                # f supported at h; (a delta_g f)(l) needs g^-1 l = h
                l = G.compose(g, h)
                if l is None:
                    continue
                val = R.mul(a, A.apply(g, fh))
                c = A.D(l).coords(val)
                for p, x in enumerate(c):
                    mat[offs[l] + p][col] += x
        mats.append(mat)
    return Module(dim, mats, "functions")


def verify_module(ring, M: Module) -> VerificationReport:
    rep = VerificationReport(f"module {M.name}")
    F = ring.R.field
    n = ring.dim
    if len(M.action) != n or any(len(m) != M.dim or any(len(r) != M.dim for r in m) for m in M.action):
        rep.add("shape", False)
        return rep
    basis_m = [F.unit_vector(M.dim, q) for q in range(M.dim)]
    bad = None
    for i in range(n):
        for j in range(n):
            uv = ring.mul(ring.algebra.basis(i), ring.algebra.basis(j))
            for m in basis_m:
                if M.act(ring, uv, m) != M.act(ring, ring.algebra.basis(i), M.act(ring, ring.algebra.basis(j), m)):
                    bad = (ring.algebra.labels[i], ring.algebra.labels[j])
                    break
            if bad:
                break
        if bad:
            break
    rep.add("associative", bad is None, bad)
    u = ring.unit
    bad = next((q for q, m in enumerate(basis_m) if M.act(ring, u, m) != m), None)
    rep.add("unital", bad is None, bad)
    return rep


def _tensor_quotient_rank(A, Ra: Subspace, left_dim: int, right_vectors, right_act):
    """Rank of the balancing relations ``x r (x) m - x (x) r m`` in ``R (x)_K M``."""
    R = A.algebra
    F = R.field
    k = len(right_vectors)
    rows = []
    for i in range(left_dim):
        for r in Ra.rows:
            xr = R.mul(R.basis(i), r)
            for q in range(k):
                v = [F.zero] * (left_dim * k)
                for p, c in enumerate(xr):
                    if c:
                        v[p * k + q] += c
                rm = right_act(r, q)  # coordinates of r.m_q in the m-basis
                for q2, c in enumerate(rm):
                    if c:
                        v[i * k + q2] -= c
                rows.append(tuple(v))
    return Subspace.span(F, left_dim * k, rows) if rows else Subspace.zero(F, left_dim * k)


def mu_check(A: PartialAction, ring, M: Module, Ra: Subspace) -> VerificationReport:
    """Bijectivity of ``R (x)_{R^alpha} M^G -> M``."""
    R, G = A.algebra, A.groupoid
    F = R.field
    rep = VerificationReport(f"mu for {M.name}")
    rows = []
    for q in range(M.dim):
        m = F.unit_vector(M.dim, q)
        row = []
        for g in G:
            lhs = M.act(ring, ring.elem(g, A.unit(g)), m)
            rhs = M.act(ring, ring.embed(A.unit(g)), m)
            row.extend(sub(lhs, rhs))
        rows.append(tuple(row))
    inv = Subspace.span(F, M.dim, left_kernel(F, rows, len(rows[0]) if rows else 0))
    rep.data["dim_invariants"] = inv.dim
    k = inv.dim

    def act_r(r, q):
        return inv.coords(M.act(ring, ring.embed(r), inv.rows[q]))

    try:
        bal = _tensor_quotient_rank(A, Ra, R.dim, inv.rows, act_r)
    except ValueError:
        rep.add("invariants_are_submodule", False)
        return rep
    images = []
    for i in range(R.dim):
        for q in range(k):
            images.append(M.act(ring, ring.embed(R.basis(i)), inv.rows[q]))
    img = Subspace.span(F, M.dim, images)
    quotient_dim = R.dim * k - bal.dim
    ker = left_kernel(F, images, M.dim) if images else []
    ker_space = Subspace.span(F, R.dim * k, ker) if ker else Subspace.zero(F, R.dim * k)
    rep.add("surjective", img.dim == M.dim, None, f"image {img.dim} of {M.dim}")
    rep.add("injective", ker_space == bal, None, f"quotient dimension {quotient_dim}")
    return rep


@dataclass
class CharacterizationReport:
    conditions: dict[str, bool]
    report: VerificationReport
    system: GaloisSystem | None = None
    sufficient: dict[str, bool] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.report.data.get("consistent", False)

    def to_dict(self) -> dict:
        return {"conditions": self.conditions, "consistent": self.consistent,
                "strictness_hypotheses": self.sufficient, "report": self.report.to_dict()}


def j_map(A: PartialAction, ring) -> list:
    """``j(a delta_g)`` flattened: for each carrier basis vector the images of the R basis."""
    R = A.algebra
    out = []
    for g, k in ring.slots:
        a = A.D(g).rows[k]
        flat = []
        for m in range(R.dim):
            flat.extend(R.mul(a, A.apply(g, R.basis(m))))
        out.append(tuple(flat))
    return out


def commutant(A: PartialAction, Ra: Subspace) -> Subspace:
    """K-linear endomorphisms of R commuting with right multiplication by ``R^alpha``.

    An endomorphism ``f`` is stored flattened: block ``m`` holds ``f(b_m)``.
    """
    R = A.algebra
    F = R.field
    n = R.dim
    # unknown (p, m): coefficient of b_p in f(b_m); constraint f(b_m r) = f(b_m) r
    rows = []
    for p in range(n):
        for m in range(n):
            row = []
            for r in Ra.rows:
                for mm in range(n):
                    # contribution of unknown (p, m) to  f(b_mm r) - f(b_mm) r
                    c = R.mul(R.basis(mm), r)[m]
                    left = [c if q == p else F.zero for q in range(n)]
                    right = R.mul(R.basis(p), r) if mm == m else F.zeros(n)
                    row.extend(sub(tuple(left), right))
            rows.append(tuple(row))
    ncols = len(rows[0]) if rows and rows[0] else 0
    if ncols == 0:
        return Subspace.full(F, n * n)
    ker = left_kernel(F, rows, ncols)
    # kernel vectors are indexed (p, m); re-flatten as block m, coordinate p
    flat = [tuple(c[p * n + m] for m in range(n) for p in range(n)) for c in ker]
    return Subspace.span(F, n * n, flat)


def dual_basis_exists(A: PartialAction, Ra: Subspace, End: Subspace):
    """Decide whether R is finitely generated projective over ``R^alpha`` by a dual basis.

    With ``x_i`` the basis of R the coefficients of ``f_i`` in a basis of
    ``Hom(R, R^alpha)`` enter linearly, so one solve decides it.
    """
    R = A.algebra
    F = R.field
    n = R.dim
    # Hom(R, R^alpha): endomorphisms in End with every f(b_m) in R^alpha
    if End.dim == 0:
        return None
    rows = []
    for v in End.rows:
        row = []
        for m in range(n):
            row.extend(Ra.reduce(tuple(v[m * n:(m + 1) * n])))
        rows.append(tuple(row))
    ker = left_kernel(F, rows, n * n)
    homs = [combine(F, c, End.rows, n * n) for c in ker]
    if not homs:
        return None
    # sum_i b_i f_i(b_m) = b_m with f_i = sum_k c_{ik} homs[k]
    unknown_rows = []
    for i in range(n):
        for h in homs:
            row = []
            for m in range(n):
                row.extend(R.mul(R.basis(i), tuple(h[m * n:(m + 1) * n])))
            unknown_rows.append(tuple(row))
    target = []
    for m in range(n):
        target.extend(R.basis(m))
    return solve_left(F, unknown_rows, tuple(target))


def galois_characterization(A: PartialAction, modules: Sequence[Module] = (),
                            system: Sequence | None = None) -> CharacterizationReport:
    """Decide each checkable condition of the Galois characterization independently."""
    from .skewring import SkewRing, graded_span

    hyp = standing_hypotheses(A)
    if not hyp.ok:
        bad = hyp.first_failure()
        raise PreconditionError(f"standing hypotheses fail: {bad.detail or bad.name}", bad.name, bad.witness)
    R, G = A.algebra, A.groupoid
    F = R.field
    n = R.dim
    ring = SkewRing(A)
    rep = VerificationReport("Galois characterization")
    Ra = invariants(A)
    cond: dict[str, bool] = {}

    # (i)
    found = find_galois(A)
    cond["i"] = found is not None
    rep.add("i_galois_system", True, None, "exists" if found else "none exists")
    if system is not None:
        rep.extend(verify_galois(A, system), "i_supplied.")

    # (ii)
    jrows = j_map(A, ring)
    jimg = Subspace.span(F, n * n, jrows)
    injective = jimg.dim == ring.dim
    End = commutant(A, Ra)
    onto = jimg == End
    dual = dual_basis_exists(A, Ra, End)
    cond["ii"] = injective and onto and dual is not None
    rep.info("ii_j", f"injective={injective}, image = commutant: {onto}, dual basis: {dual is not None}")
    if found:
        # the dual basis {x_i, t(y_i -)} must work whenever a system exists
        ok = True
        for m in range(n):
            x = R.basis(m)
            total = R.zero
            for xi, yi in found:
                total = add(total, R.mul(xi, trace(A, R.mul(yi, x))))
            ok = ok and total == x
        rep.add("ii_trace_dual_basis", ok)

    # (iii)
    mods = [function_module(A, ring), *modules]
    mu_ok = True
    for M in mods:
        vm = verify_module(ring, M)
        if not vm.ok:
            rep.extend(vm, f"iii_{M.name}.")
            mu_ok = False
            continue
        mr = mu_check(A, ring, M, Ra)
        rep.info(f"iii_{M.name}", f"surjective={mr.by_name('surjective')[0].ok}, "
                 f"injective={mr.by_name('injective')[0].ok}" if mr.by_name('surjective') else "not a submodule")
        mu_ok = mu_ok and mr.ok
    cond["iii"] = mu_ok

    # (iv)
    dims = sum(A.D(g).dim for g in G)
    rho_rows = []
    for i in range(n):
        for jx in range(n):
            row = []
            for g in G:
                row.extend(R.mul(R.basis(i), A.apply(g, R.basis(jx))))
            rho_rows.append(tuple(row))
    rho_img = Subspace.span(F, n * len(G), rho_rows)
    rho_ker = Subspace.span(F, n * n, left_kernel(F, rho_rows, n * len(G)))
    bal = _tensor_quotient_rank(A, Ra, n, [R.basis(q) for q in range(n)],
                                lambda r, q: R.mul(r, R.basis(q)))
    cond["iv"] = rho_img.dim == dims and rho_ker == bal
    rep.info("iv_rho", f"image {rho_img.dim} of {dims}, kernel equals balancing relations: {rho_ker == bal}")

    # (v) via products in the skew ring
    t = ring.t
    lefts = [ring.mul(ring.embed(R.basis(i)), t) for i in range(n)]
    rights = [ring.embed(R.basis(i)) for i in range(n)]
    RtR = graded_span(ring, lefts, rights)
    cond["v"] = RtR.dim == ring.dim
    rep.info("v_RtR", f"dim RtR = {RtR.dim} of {ring.dim}")

    # (vi) via the pairing formula
    tp = []
    for i in range(n):
        for jx in range(n):
            comps = {g: R.mul(R.basis(i), A.apply(g, R.basis(jx))) for g in G}
            tp.append(ring.from_components(comps))
    tp_img = Subspace.span(F, ring.dim, tp)
    cond["vi"] = tp_img.dim == ring.dim
    rep.add("v_vi_same_image", tp_img == RtR)

    # (viii) and (x)
    timg = trace_image(A)
    cond["viii"] = timg == Ra
    one = R.unit
    tau_unit = solve_left(F, [trace(A, R.basis(i)) for i in range(n)], one) is not None
    tau = timg == Ra
    rep.add("tau_criterion", tau == tau_unit, None, "image equals invariants iff 1_R is a trace")
    cond["x"] = tau and cond["vi"]

    main = [cond[k] for k in ("i", "ii", "iv", "v", "vi")]
    consistent = len(set(main)) == 1
    if any(main):
        consistent = consistent and cond["viii"] == cond["x"]
    rep.add("consistent", consistent, None if consistent else dict(cond))
    rep.data["consistent"] = consistent
    rep.data["conditions"] = dict(cond)

    cor = strictness_hypotheses(A)
    return CharacterizationReport(cond, rep, found, cor)


def strictness_hypotheses(A: PartialAction) -> dict[str, bool]:
    """Which of the three sufficient hypotheses for "Galois iff strict" hold."""
    R, G = A.algebra, A.groupoid
    F = R.field
    t1 = trace(A, R.unit)
    ii = inverse_in(R, t1, Subspace.full(F, R.dim), R.unit) is not None
    iii = True
    for e in G.identities:
        if F(len(G.isotropy(e))) == F.zero or restricted_traces_agree(A, e) is not None:
            iii = False
    return {"commutative": R.is_commutative, "trace_of_one_invertible": ii, "isotropy_trace": iii}


# -- the context between the skew ring and the invariants ---------------------------

def left_action(A: PartialAction, ring, u, x):
    """``(a delta_g) . x = a alpha_g(x 1_{g^-1})``, extended linearly."""
    R = A.algebra
    out = R.zero
    for g, a in ring.components(u).items():
        if any(a):
            out = add(out, R.mul(a, A.apply(g, x)))
    return out


def right_action(A: PartialAction, ring, x, u):
    """``x . (a delta_g) = alpha_{g^-1}(x a)``, extended linearly."""
    R, G = A.algebra, A.groupoid
    out = R.zero
    for g, a in ring.components(u).items():
        if any(a):
            out = add(out, A.alpha(G.inverse(g))(R.mul(x, a)))
    return out


def tau_prime(A: PartialAction, ring, x, y):
    """``x (x) y -> sum_g x alpha_g(y 1_{g^-1}) delta_g``."""
    R = A.algebra
    return ring.from_components({g: R.mul(x, A.apply(g, y)) for g in A.groupoid})


def invariant_context(A: PartialAction, ring=None) -> VerificationReport:
    """Module laws, balancing and compatibility of the pairings ``t(xy)`` and ``tau'``."""
    from .skewring import SkewRing

    ring = ring or SkewRing(A)
    R = A.algebra
    F = R.field
    rep = VerificationReport("invariant Morita context")
    Rb = [R.basis(i) for i in range(R.dim)]
    Sb = [ring.algebra.basis(i) for i in range(ring.dim)]

    def first(pred, *pools):
        for combo in product(*pools):
            if not pred(*combo):
                return combo
        return None

    def show(combo):
        return None if combo is None else tuple(
            ring.fmt(c) if len(c) == ring.dim and len(c) != R.dim else R.fmt(c) for c in combo)

    one = ring.unit
    w = first(lambda x: left_action(A, ring, one, x) == x and right_action(A, ring, x, one) == x, Rb)
    rep.add("unital_actions", w is None, show(w))
    w = first(lambda u, v, x: left_action(A, ring, ring.mul(u, v), x)
              == left_action(A, ring, u, left_action(A, ring, v, x)), Sb, Sb, Rb)
    rep.add("left_module", w is None, show(w))
    w = first(lambda x, u, v: right_action(A, ring, x, ring.mul(u, v))
              == right_action(A, ring, right_action(A, ring, x, u), v), Rb, Sb, Sb)
    rep.add("right_module", w is None, show(w))
    Ra = invariants(A)
    w = first(lambda u, x, r: R.mul(left_action(A, ring, u, x), r) == left_action(A, ring, u, R.mul(x, r)),
              Sb, Rb, Ra.rows)
    rep.add("left_bimodule", w is None, show(w))
    w = first(lambda x, u, y: trace(A, R.mul(right_action(A, ring, x, u), y))
              == trace(A, R.mul(x, left_action(A, ring, u, y))), Rb, Sb, Rb)
    rep.add("tau_balanced", w is None, show(w))
    w = first(lambda x, r, y: tau_prime(A, ring, R.mul(x, r), y) == tau_prime(A, ring, x, R.mul(r, y)),
              Rb, Ra.rows, Rb)
    rep.add("tau_prime_balanced", w is None, show(w))
    w = first(lambda x, y, z: left_action(A, ring, tau_prime(A, ring, x, y), z) == R.mul(x, trace(A, R.mul(y, z))),
              Rb, Rb, Rb)
    rep.add("compatibility_left", w is None, show(w))
    w = first(lambda x, y, z: right_action(A, ring, x, tau_prime(A, ring, y, z)) == R.mul(trace(A, R.mul(x, y)), z),
              Rb, Rb, Rb)
    rep.add("compatibility_right", w is None, show(w))
    timg = trace_image(A)
    tau_onto = timg == Ra
    has_one = solve_left(F, [trace(A, b) for b in Rb], R.unit) is not None
    rep.add("tau_surjective_iff_trace_one", tau_onto == has_one)
    tp = Subspace.span(F, ring.dim, [tau_prime(A, ring, x, y) for x in Rb for y in Rb])
    rep.data.update(tau_surjective=tau_onto, tau_prime_surjective=tp.dim == ring.dim,
                    strict=tau_onto and tp.dim == ring.dim)
    return rep


def function_module_invariants(A: PartialAction, ring=None) -> VerificationReport:
    """``r -> f_r`` with ``f_r(h) = alpha_h(r 1_{h^-1})`` is onto the invariants of the function module."""
    from .skewring import SkewRing

    ring = ring or SkewRing(A)
    R, G = A.algebra, A.groupoid
    F = R.field
    M = function_module(A, ring)
    rep = VerificationReport("function module invariants")
    rows = []
    for q in range(M.dim):
        m = F.unit_vector(M.dim, q)
        row = []
        for g in G:
            row.extend(sub(M.act(ring, ring.elem(g, A.unit(g)), m), M.act(ring, ring.embed(A.unit(g)), m)))
        rows.append(tuple(row))
    inv = Subspace.span(F, M.dim, left_kernel(F, rows, len(rows[0])))
    imgs = []
    for i in range(R.dim):
        v = []
        for h in G:
            v.extend(A.D(h).coords(A.apply(h, R.basis(i))))
        imgs.append(tuple(v))
    img = Subspace.span(F, M.dim, imgs)
    rep.add("injective", img.dim == R.dim, None, f"image dimension {img.dim}")
    rep.add("onto_invariants", img == inv, None, f"invariants dimension {inv.dim}")
    return rep
