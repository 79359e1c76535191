import random

from hypothesis import given
from hypothesis import strategies as st

from pgact.action import hypotheses_hold, is_global, verify_partial_action
from pgact.galois import find_galois
from pgact.groupoid import verify_groupoid
from pgact.instance import actions_equal
from pgact.linalg import Field
from pgact.random_instances import GROUPS, instances, random_groupoid, random_instance


def test_group_tables_have_expected_orders():
    assert {k: len(v) for k, v in GROUPS.items()} == {"Z1": 1, "Z2": 2, "Z3": 3, "Z4": 4, "Z2xZ2": 4, "S3": 6}


def test_same_seed_same_instance():
    a, b = random_instance(42), random_instance(42)
    assert actions_equal(a.action, b.action)
    assert a.description == b.description


def test_instances_uses_distinct_seeds():
    seeds = [ri.seed for ri in instances(5, seed=3)]
    assert len(set(seeds)) == 5


@given(st.integers(min_value=0, max_value=10**6))
def test_random_groupoid_bounds(seed):
    G, info = random_groupoid(random.Random(seed), max_order=8, max_identities=3)
    assert len(G) <= 8
    assert 1 <= len(G.identities) <= 3
    d = G.to_dict()
    assert verify_groupoid(d["elements"], {(g, h): gh for g, h, gh in d["compose"]}, d["inverse"]).ok
    assert sum(len(objs) for objs, _, _ in info) == len(G.identities)


@given(st.integers(min_value=0, max_value=10**6))
def test_random_instance_is_valid(seed):
    ri = random_instance(seed)
    A = ri.action
    assert A.algebra.dim <= 8
    assert verify_partial_action(A).ok
    assert hypotheses_hold(A)
    assert is_global(ri.ambient)


@given(st.integers(min_value=0, max_value=10**6), st.sampled_from([2, 3]))
def test_prime_field_instances(seed, p):
    ri = random_instance(seed, Field.prime(p), max_dim=5)
    assert ri.action.algebra.dim <= 5
    assert hypotheses_hold(ri.action)


def test_predictor_matches_solver_on_a_batch():
    seen = set()
    for ri in instances(40, seed=11):
        assert (find_galois(ri.action) is not None) == ri.predicted_galois, ri.description
        seen.add(ri.predicted_galois)
    assert seen == {True, False}
