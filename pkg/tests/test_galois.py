from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgact.errors import PreconditionError
from pgact.fixtures import fx_a, fx_b, fx_c, fx_d, fx_d_galois_system, fx_e, trivial_z2
from pgact.galois import (
    Module, all_enumerations, enumeration_condition_all, enumeration_condition, strictness_hypotheses, find_galois, function_module,
    function_module_invariants, invariant_context, invariants, invariants_iso, isotropy_invariants,
    isotropy_trace, j_map, psi, restricted_traces_agree, galois_characterization, trace, trace_image, trace_report,
    transfer_to_global, transfer_to_partial, verify_galois, verify_module,
)
from pgact.globalize import build_globalization
from pgact.groupoid import Groupoid
from pgact.linalg import Field, Subspace, add, scale
from pgact.random_instances import random_instance
from pgact.skewring import SkewRing


def span(R, *labels):
    return Subspace.span(R.field, R.dim, [R.element(s) for s in labels])


def brute_invariants(A):
    """Every vector of a small prime field, tested against the definition."""
    R, G = A.algebra, A.groupoid
    F = R.field
    p = F.characteristic
    found = []
    for coords in product(range(p), repeat=R.dim):
        x = tuple(F(c) for c in coords)
        if all(A.apply(g, x) == R.mul(x, A.unit(g)) for g in G):
            found.append(x)
    return found


@pytest.mark.parametrize("make,labels", [
    (fx_a, ["e1 + e3", "e2"]),
    (fx_b, ["e1 + e3", "e2 + e4", "e5"]),
    (fx_d, ["e1", "e2", "e3 + e4", "e5"]),
    (fx_e, ["e1"]),
])
def test_invariants_on_fixtures(make, labels):
    A = make()
    assert invariants(A) == span(A.algebra, *labels)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("make", [fx_a, fx_b, fx_c, fx_d])
def test_invariants_against_exhaustive_search(make, p):
    A = make(Field.prime(p))
    Ra = invariants(A)
    brute = brute_invariants(A)
    assert len(brute) == p ** Ra.dim
    assert all(x in Ra for x in brute)


def test_isotropy_invariants_are_larger_for_fx_b():
    A = fx_b()
    assert isotropy_invariants(A).dim == 5
    assert invariants(A).dim == 3


def test_trace_values():
    A = fx_c()
    R = A.algebra
    assert trace(A, R.element("e3")) == R.element("e2 + 2*e3")
    assert trace(A, R.element("e1")) == R.element("e1")
    B = fx_a()
    assert trace(B, B.algebra.element("e1")) == B.algebra.element("e1 + e3")


def test_trace_report_flags_fx_c():
    A = fx_c()
    rep = trace_report(A)
    assert not rep.data["hypotheses_hold"]
    failed = {c.name for c in rep.checks if not c.ok}
    assert {"image_in_invariants", "invariant_under_arrows"} <= failed
    with pytest.raises(PreconditionError):
        galois_characterization(A)


@pytest.mark.parametrize("make", [fx_a, fx_b, fx_d, fx_e])
def test_trace_report_passes_under_hypotheses(make):
    A = make()
    rep = trace_report(A)
    assert rep.ok and rep.data["hypotheses_hold"]
    assert trace_image(A) <= invariants(A)


@given(st.integers(min_value=0, max_value=10**6), st.data())
def test_trace_is_bimodule_map(seed, data):
    A = random_instance(seed).action
    R = A.algebra
    F = R.field
    vec = st.lists(st.integers(-3, 3), min_size=R.dim, max_size=R.dim).map(lambda c: tuple(F(a) for a in c))
    x, y = data.draw(vec), data.draw(vec)
    c = F(data.draw(st.integers(-5, 5)))
    assert trace(A, add(x, scale(c, y))) == add(trace(A, x), scale(c, trace(A, y)))
    Ra = invariants(A)
    for r in Ra.rows:
        assert trace(A, R.mul(r, x)) == R.mul(r, trace(A, x))
        assert trace(A, R.mul(x, r)) == R.mul(trace(A, x), r)
    assert trace(A, x) in Ra


def test_restricted_traces_on_fx_d():
    A = fx_d()
    R = A.algebra
    # no arrow leaves g1 or g2, so both traces are sums over the isotropy group
    assert restricted_traces_agree(A, "g1") is None
    assert restricted_traces_agree(A, "g2") is None
    assert isotropy_trace(A, "g2", R.element("e3")) == R.element("e3 + e4")


def test_restricted_traces_differ_across_an_arrow():
    A = fx_a()
    R = A.algebra
    assert restricted_traces_agree(A, "d(g)") == R.element("e1")
    assert isotropy_trace(A, "d(g)", R.element("e1")) == R.element("e1")
    assert trace(A, R.element("e1")) == R.element("e1 + e3")


@pytest.mark.parametrize("make,dim", [(fx_a, 2), (fx_b, 3), (fx_d, 4), (fx_e, 1)])
def test_invariant_ring_isomorphism(make, dim):
    Gl = build_globalization(make())
    iso = invariants_iso(Gl)
    assert iso.report.ok, iso.report.summary()
    assert iso.report.data["dim_R_alpha"] == iso.report.data["dim_T_beta"] == dim


def test_psi_formulas_agree_on_invariants():
    Gl = build_globalization(fx_d())
    for a in invariants(Gl.action).rows:
        assert psi(Gl, a, "orthogonal") == psi(Gl, a, "boolean")


def test_supplied_galois_system_for_fx_d():
    A = fx_d()
    assert verify_galois(A, fx_d_galois_system()).ok
    rep = verify_galois(A, fx_d_galois_system(drop_last=True))
    bad = rep.first_failure()
    assert bad.witness == "g2"
    assert "e3 + e5" in bad.detail


@pytest.mark.parametrize("make", [fx_a, fx_b, fx_c, fx_d, fx_e])
def test_coordinate_basis_is_a_galois_system(make):
    # no coordinate is fixed by a non-identity arrow, so x_i = y_i = e_i works
    A = make()
    R = A.algebra
    system = [(R.basis(i), R.basis(i)) for i in range(R.dim)]
    assert verify_galois(A, system).ok
    found = find_galois(A)
    assert found is not None and verify_galois(A, found).ok


def test_fx_b_is_galois():
    A = fx_b()
    rep = galois_characterization(A)
    assert rep.conditions["i"]
    assert rep.consistent


def test_trivial_action_has_no_galois_system():
    A = trivial_z2()
    R = A.algebra
    assert find_galois(A) is None
    assert not verify_galois(A, [(R.unit, R.unit)]).ok
    rep = galois_characterization(A)
    assert rep.consistent
    assert not any(rep.conditions[k] for k in ("i", "ii", "iv", "v", "vi"))


@pytest.mark.parametrize("make", [fx_a, fx_b, fx_d, fx_e])
def test_characterization_all_true(make):
    rep = galois_characterization(make())
    assert rep.consistent
    assert all(rep.conditions.values()), rep.conditions
    assert rep.report.ok


def test_characterization_with_supplied_regular_module():
    A = fx_d()
    ring = SkewRing(A)
    n = ring.dim
    basis = [ring.algebra.basis(i) for i in range(n)]
    mats = []
    for b in basis:
        cols = [ring.mul(b, v) for v in basis]
        mats.append([[cols[q][p] for q in range(n)] for p in range(n)])
    M = Module(n, mats, "regular")
    assert verify_module(ring, M).ok
    rep = galois_characterization(A, modules=[M], system=fx_d_galois_system())
    assert rep.conditions["iii"] and rep.consistent
    assert rep.report.ok


def test_function_module_is_a_module():
    A = fx_d()
    ring = SkewRing(A)
    M = function_module(A, ring)
    assert M.dim == ring.dim
    assert verify_module(ring, M).ok
    assert function_module_invariants(A, ring).ok


def test_j_is_multiplicative():
    A = fx_d()
    ring = SkewRing(A)
    R = A.algebra
    n = R.dim
    rows = j_map(A, ring)

    def as_map(u):
        flat = [R.field.zero] * (n * n)
        for k, c in enumerate(u):
            if c:
                flat = [a + c * b for a, b in zip(flat, rows[k])]
        return [tuple(flat[m * n:(m + 1) * n]) for m in range(n)]

    def apply(f, x):
        out = R.zero
        for m, c in enumerate(x):
            if c:
                out = add(out, scale(c, f[m]))
        return out

    basis = [ring.algebra.basis(i) for i in range(ring.dim)]
    for u in basis:
        for v in basis:
            fu, fv, fuv = as_map(u), as_map(v), as_map(ring.mul(u, v))
            for m in range(n):
                assert apply(fuv, R.basis(m)) == apply(fu, apply(fv, R.basis(m)))


@pytest.mark.parametrize("make", [fx_a, fx_b, fx_d, fx_e, trivial_z2])
def test_invariant_context(make):
    rep = invariant_context(make())
    assert rep.ok, rep.summary()
    assert rep.data["strict"] == (make is not trivial_z2)


def test_strictness_hypotheses():
    assert strictness_hypotheses(fx_d())["isotropy_trace"]
    assert not strictness_hypotheses(fx_a())["isotropy_trace"]
    assert strictness_hypotheses(fx_a())["commutative"]


def test_transfer_both_ways():
    Gl = build_globalization(fx_d())
    glob = transfer_to_global(Gl, fx_d_galois_system())
    assert len(glob) == 4
    assert verify_galois(Gl.beta, glob).ok
    back = transfer_to_partial(Gl, glob)
    assert verify_galois(Gl.action, back).ok


def _three_objects():
    return Groupoid.transitive(["x", "y", "z"], ["1"], {("1", "1"): "1"})


def test_enumeration_condition_per_enumeration():
    G = _three_objects()
    results = enumeration_condition_all(G)
    assert len(results) == 8
    assert sum(ok for _, ok, _ in results) == 2
    ok, wit = enumeration_condition(G)
    assert not ok and wit == ("x:1:y", 3)
    for en, ok, wit in results:
        assert enumeration_condition(G, en) == (ok, wit)


def test_enumerations_start_at_the_identity():
    G = _three_objects()
    for en in all_enumerations(G):
        for e, xs in en.items():
            assert xs[0] == e and sorted(xs) == sorted(G.xset(e))


@settings(max_examples=25)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_characterization_is_consistent(seed):
    inst = random_instance(seed)
    rep = galois_characterization(inst.action)
    assert rep.consistent
    assert rep.conditions["i"] == inst.predicted_galois
    if rep.conditions["i"]:
        assert verify_galois(inst.action, rep.system).ok
