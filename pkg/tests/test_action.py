import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgact.action import (
    PartialAction, is_global, isotropy_restriction, restrict, standing_hypotheses, verify_partial_action,
)
from pgact.algebra import Algebra
from pgact.errors import InstanceError, PreconditionError, StructuralError
from pgact.fixtures import (
    FIXTURES, arrow_groupoid, broken_composition, fx_a, fx_b, fx_c, fx_d, fx_e, nonideal_span,
    nonunital_dual_numbers, trivial_z2,
)
from pgact.linalg import Field, Subspace
from pgact.random_instances import random_instance

VALID = ["FX-A", "FX-B", "FX-C", "FX-D", "FX-E", "trivial-z2", "nonunital"]


@pytest.mark.parametrize("name", VALID)
def test_fixtures_are_partial_actions(name):
    rep = verify_partial_action(FIXTURES[name]())
    assert rep.ok, rep.summary()


def test_fixtures_over_prime_fields():
    for p in (2, 3, 5):
        assert verify_partial_action(fx_d(Field.prime(p))).ok


def test_identity_variant_of_loop_fixture_is_still_an_action():
    assert verify_partial_action(fx_c(swap=False)).ok


def test_non_ideal_domain_is_reported():
    rep = verify_partial_action(nonideal_span())
    assert not rep.ok
    assert rep.by_name("ideal_chain") and not all(c.ok for c in rep.by_name("ideal_chain"))


def test_broken_composition_fails_axiom_iii_at_a_a():
    rep = verify_partial_action(broken_composition())
    bad = [c for c in rep.failures if c.name == "axiom_iii"]
    assert bad and bad[0].witness[:2] == ("a", "a")


def test_global_detection():
    assert not any(is_global(f()) for f in (fx_a, fx_b, fx_c, fx_d))
    assert is_global(fx_e()) and is_global(trivial_z2())


def test_units_are_computed_not_declared():
    A = fx_b()
    R = A.algebra
    assert A.unit("g") == R.element("e3 + e4")
    assert A.unit("r(g)") == R.element("e3 + e4 + e5")
    assert nonunital_dual_numbers().unit("s") is None


def test_apply_needs_a_unital_domain():
    A = nonunital_dual_numbers()
    with pytest.raises(PreconditionError):
        A.apply("s", A.algebra.element("eps"))


def test_standing_hypotheses():
    for f in (fx_a, fx_b, fx_d, fx_e, trivial_z2):
        assert standing_hypotheses(f()).ok
    rep = standing_hypotheses(fx_c())
    assert not rep.ok
    assert "R != (+) D_e" in rep.by_name("direct_sum")[0].detail
    assert not standing_hypotheses(nonunital_dual_numbers()).by_name("unital_ideals")[0].ok


def test_from_data_shape_errors():
    G = arrow_groupoid()
    R = Algebra.coordinate_ring(Field.rational(), 3)
    rows = {g: [R.element("e1")] for g in G}
    with pytest.raises(StructuralError):
        PartialAction.from_data(G, R, rows, {g: ["not-used", "x"] if g == "g" else "identity" for g in G})
    with pytest.raises(InstanceError):
        PartialAction.from_data(G, R, {"g": rows["g"]}, {})


def test_isotropy_restriction_of_loop_fixture():
    A = fx_d()
    sub, emb = isotropy_restriction(A, "g2")
    assert sorted(sub.groupoid.elements) == ["g2", "g3"]
    assert sub.algebra.dim == 3
    assert verify_partial_action(sub).ok


def test_restriction_preconditions():
    with pytest.raises(PreconditionError):
        restrict(fx_a(), {e: fx_a().D(e) for e in fx_a().groupoid.identities})
    R = Algebra(Field.rational(), 2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, ["1", "x"])
    B = PartialAction.trivial(trivial_z2().groupoid, R)
    with pytest.raises(StructuralError):
        restrict(B, {})
    with pytest.raises(PreconditionError) as err:
        restrict(B, {"1": Subspace.span(R.field, 2, [R.element("1 + x")])})
    assert err.value.witness is not None


def action_identities(A):
    """Inverse law and the image of overlaps on every pair of arrows."""
    G = A.groupoid
    for g in G:
        gi = G.inverse(g)
        for v in A.D(gi).rows:
            assert A.alpha(gi)(A.alpha(g)(v)) == v
        for h in G:
            if G.compose(g, h) is None:
                continue
            overlap = A.D(gi) & A.D(h)
            assert A.alpha(g).image(overlap) == A.D(g) & A.D(G.mul(g, h))


@pytest.mark.parametrize("name", VALID[:-1])
def test_inverse_law_and_overlaps_on_fixtures(name):
    action_identities(FIXTURES[name]())


@given(st.integers(min_value=0, max_value=10**6))
def test_restrictions_of_global_actions_are_partial_actions(seed):
    ri = random_instance(seed)
    assert is_global(ri.ambient)
    assert verify_partial_action(ri.ambient).ok
    assert verify_partial_action(ri.action).ok
    assert standing_hypotheses(ri.action).ok
    action_identities(ri.action)
