"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import pytest

from pgact.action import standing_hypotheses, verify_partial_action
from pgact.fixtures import (
    FIXTURES, fx_a, fx_a_hand_globalization, fx_b, fx_c, fx_d, fx_d_galois_system, nonunital_dual_numbers,
)
from pgact.galois import (
    enumeration_condition, strictness_hypotheses, find_galois, invariants, invariants_iso, isotropy_invariants,
    isotropy_trace, galois_characterization, trace, trace_image, transfer_to_global, transfer_to_partial, verify_galois,
)
from pgact.globalize import Globalization, build_globalization, can_globalize, equivalence
from pgact.linalg import Field, Subspace
from pgact.random_instances import instances
from pgact.skewring import SkewRing, _unit_of, corners, morita_context_global

RANDOM_COUNT = 100


@pytest.fixture(scope="module")
def family():
    return list(instances(RANDOM_COUNT, seed=2026))


def test_criterion_1_fx_a_globalization(criterion):
    A = fx_a()
    Gl = build_globalization(A)
    beta, phi = fx_a_hand_globalization()
    hand = Globalization.from_parts(A, beta, phi)
    eq = equivalence(hand, Gl)
    R, T = A.algebra, hand.T
    # beta_g(a e1 + b e2) = a e3 + b e4 on a basis, carried through eta
    moved = [eq.maps["r(g)"](Gl.beta.alpha("g")(Gl.phi["d(g)"](R.element(s)))) for s in ("e1", "e2")]
    checks = {
        "dim T = 4": Gl.T.dim == 4,
        "equivalent to the explicit model": eq.ok,
        "beta_g matches": moved == [T.element("e3"), T.element("e4")],
        "E_d(g) = phi(D_d(g)), dim 2": Gl.E("d(g)").dim == 2 and Gl.phi["d(g)"].image() == Gl.E("d(g)"),
        "dim E_r(g) = 2": Gl.E("r(g)").dim == 2,
    }
    bad = [k for k, v in checks.items() if not v]
    assert criterion(1, not bad, "FX-A: dim T = 4, E dims 2/2, beta_g up to eta" + (f"; failed {bad}" if bad else ""))


def test_criterion_2_fx_b_invariants(criterion):
    A = fx_b()
    R = A.algebra
    Ra = invariants(A)
    expected = tuple(R.element(s) for s in ("e1 + e3", "e2 + e4", "e5"))
    iso = isotropy_invariants(A)
    ok = Ra.rows == expected and Ra < iso and (Ra.dim, iso.dim) == (3, 5)
    assert criterion(2, ok, f"FX-B: reduced basis {[R.fmt(v) for v in Ra.rows]}, dims {Ra.dim} < {iso.dim}")


def test_criterion_3_fx_c_trace(criterion):
    A = fx_c()
    R = A.algebra
    Ra = invariants(A)
    t3 = trace(A, R.element("e3"))
    t1 = trace(A, R.element("e1"))
    cross = trace(A, A.apply("g3", R.mul(R.element("e1"), A.unit("g3"))))
    hyp = standing_hypotheses(A)
    cause = hyp.first_failure()
    ok = (t3 == R.element("e2 + 2*e3") and t3 not in Ra and t1 == R.element("e1") and not any(cross)
          and cause is not None and cause.name == "direct_sum")
    assert criterion(3, ok, f"FX-C: t(e3) = {R.fmt(t3)} not in R^alpha, t(e1) = {R.fmt(t1)}, "
                            f"cause {cause.name if cause else None}")


def test_criterion_4_restricted_traces(criterion):
    A = fx_d()
    agree = {}
    for e in ("g1", "g2"):
        agree[e] = all(trace(A, x) == isotropy_trace(A, e, x) for x in A.D(e).rows)
    hook = strictness_hypotheses(A)["isotropy_trace"] and A.field == Field.rational()
    ok = all(agree.values()) and hook
    assert criterion(4, ok, f"FX-D: restricted traces agree {agree}, isotropy hypothesis over Q {hook}")


def test_criterion_5_invariant_isomorphism(criterion, family):
    failures = []
    for ri in family:
        rep = invariants_iso(build_globalization(ri.action)).report
        if not rep.ok:
            failures.append((ri.seed, rep.first_failure().name))
    ok = not failures
    assert criterion(5, ok, f"psi on R^alpha a ring iso, inverse = multiply by 1_R: "
                            f"{len(family) - len(failures)}/{len(family)}" + (f" {failures[:3]}" if failures else ""))


def test_criterion_6_characterization_consistency(criterion, family):
    disagreements = []
    galois = 0
    for ri in family:
        c = galois_characterization(ri.action).conditions
        main = {c[k] for k in ("i", "ii", "iv", "v", "vi")}
        good = len(main) == 1 and (not any(main) or c["viii"] == c["x"])
        galois += c["i"]
        if not good:
            disagreements.append((ri.seed, c))
    ok = not disagreements
    assert criterion(6, ok, f"(i),(ii),(iv),(v),(vi) agree on {len(family) - len(disagreements)}/{len(family)} "
                            f"instances ({galois} Galois)" + (f" {disagreements[:2]}" if disagreements else ""))


def test_criterion_7_corners_and_strict_context(criterion, family):
    failures, tested = [], 0
    for ri in family:
        if not can_globalize(ri.action).ok:
            continue
        Gl = build_globalization(ri.action)
        B = SkewRing(Gl.beta)
        if _unit_of(B) is None:
            continue
        tested += 1
        cor = corners(Gl, B_ring=B)
        ctx = morita_context_global(Gl, cor, B_ring=B)
        if not (cor.report.ok and ctx.strict):
            failures.append(ri.seed)
    ok = not failures and tested > 0
    assert criterion(7, ok, f"corner identities and strict context on {tested - len(failures)}/{tested} instances")


def test_criterion_8_transfer_on_fx_d(criterion):
    A = fx_d()
    system = fx_d_galois_system()
    Gl = build_globalization(A)
    cond, _ = enumeration_condition(A.groupoid, Gl.enumeration)
    partial_ok = verify_galois(A, system).ok
    glob = transfer_to_global(Gl, system)
    global_ok = verify_galois(Gl.beta, glob).ok
    back_ok = verify_galois(A, transfer_to_partial(Gl, glob)).ok
    ok = cond and partial_ok and global_ok and back_ok
    assert criterion(8, ok, f"FX-D: condition {cond}, system {partial_ok}, on T {global_ok} "
                            f"({len(glob)} pairs), back on R {back_ok}")


def _identity_failures(A):
    G = A.groupoid
    bad = []
    for g in G:
        gi = G.inverse(g)
        if any(A.alpha(gi)(A.alpha(g)(v)) != v for v in A.D(gi).rows):
            bad.append(("inverse", g))
        for h in G:
            if G.compose(g, h) is not None:
                if A.alpha(g).image(A.D(gi) & A.D(h)) != A.D(g) & A.D(G.mul(g, h)):
                    bad.append(("overlap", g, h))
    if standing_hypotheses(A).ok:
        Ra = invariants(A)
        if not trace_image(A) <= Ra:
            bad.append(("trace_image",))
        for g in G:
            gi = G.inverse(g)
            if any(trace(A, A.apply(g, x)) != trace(A, x) for x in A.D(gi).rows):
                bad.append(("trace_invariance", g))
    return bad


def test_criterion_9_action_and_trace_identities(criterion, family):
    actions = [f() for f in FIXTURES.values()] + [ri.action for ri in family]
    verified = [A for A in actions if verify_partial_action(A).ok]
    failures = [(A.name, f) for A in verified for f in _identity_failures(A)]
    ok = not failures and len(verified) > RANDOM_COUNT
    assert criterion(9, ok, f"inverse law, overlaps and trace identities on {len(verified)} verified actions"
                            + (f"; {failures[:3]}" if failures else ""))


def test_criterion_10_negative_controls(criterion):
    A = fx_b()
    found = find_galois(A)
    c = galois_characterization(A).conditions
    fx_b_ok = found is None and not any(c[k] for k in ("ii", "iv", "v", "vi"))
    rep = can_globalize(nonunital_dual_numbers())
    bad = rep.first_failure()
    unitless_ok = not rep.ok and bad is not None and bad.witness == "s"
    detail = (f"FX-B not Galois: {fx_b_ok} (find_galois {'none' if found is None else 'found a system'}, "
              f"(ii),(iv),(v),(vi) = {[c[k] for k in ('ii', 'iv', 'v', 'vi')]}); "
              f"unit-less D_s rejected with witness s: {unitless_ok}")
    assert criterion(10, fx_b_ok and unitless_ok, detail)
