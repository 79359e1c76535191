from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, Rational

from pgact.errors import InstanceError
from pgact.linalg import EchelonBuilder, Field, Subspace, left_kernel, rank, rref, solve_left, sum_spaces

QQ = Field.rational()


def vec(*xs, field=QQ):
    return field.vector(xs)


def test_rref_matches_sympy_on_fixed_matrix():
    rows = [vec(1, 2, 0, 2, 5), vec(-2, -5, 1, -1, -8), vec(0, -3, 3, 4, 1), vec(3, 6, 0, -7, 2)]
    got, pivots = rref(QQ, rows, 5)
    want, want_piv = Matrix([[int(x) for x in r] for r in rows]).rref()
    assert pivots == tuple(want_piv)
    for i, r in enumerate(got):
        assert [Rational(int(x.numerator), int(x.denominator)) for x in r] == list(want.row(i))


def test_rref_of_zero_rows_is_empty():
    assert rref(QQ, [vec(0, 0, 0)], 3) == ((), ())


def test_left_kernel_annihilates_rows():
    rows = [vec(1, 1, 0), vec(2, 2, 0), vec(0, 1, 1)]
    ker = left_kernel(QQ, rows, 3)
    assert len(ker) == 1
    c = ker[0]
    total = [sum(c[i] * rows[i][j] for i in range(3)) for j in range(3)]
    assert all(x == 0 for x in total)


def test_solve_left_finds_combination_or_none():
    rows = [vec(1, 0, 1), vec(0, 1, 1)]
    sol = solve_left(QQ, rows, vec(2, 3, 5))
    assert sol == vec(2, 3)
    assert solve_left(QQ, rows, vec(0, 0, 1)) is None


def test_prime_field_arithmetic_wraps():
    F = Field.prime(5)
    assert F(3) + F(4) == F(2)
    assert F.fmt(F(-1)) == "4"
    assert rank(F, [vec(1, 2, field=F), vec(2, 4, field=F)], 2) == 1


def test_field_parsing_rejects_garbage():
    for bad in ["reals", "fp:4", "fp:x", "fp:1"]:
        with pytest.raises(InstanceError):
            Field.parse(bad)


def test_rational_scalars_parse_fractions():
    assert QQ("3/4") == QQ(Fraction(3, 4))
    with pytest.raises(InstanceError):
        QQ("1/0")


def test_subspace_coords_roundtrip_and_outside_vector():
    S = Subspace.span(QQ, 3, [vec(1, 1, 0), vec(0, 1, 1)])
    v = vec(2, 5, 3)
    assert S.from_coords(S.coords(v)) == v
    with pytest.raises(ValueError):
        S.coords(vec(1, 0, 0))


def test_echelon_builder_reports_new_vectors():
    b = EchelonBuilder(QQ, 3)
    assert b.add(vec(1, 1, 0))
    assert not b.add(vec(2, 2, 0))
    assert b.add(vec(0, 0, 1))
    assert vec(3, 3, 7) in b
    assert b.dim == 2
    assert b.subspace() == Subspace.span(QQ, 3, [vec(1, 1, 0), vec(0, 0, 1)])


small = st.integers(min_value=-3, max_value=3)


def matrices(n=4, max_rows=4):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=0, max_size=max_rows)


def space(rows, n=4):
    return Subspace.span(QQ, n, [QQ.vector(r) for r in rows])


@given(matrices(), matrices())
def test_grassmann_identity(a, b):
    U, W = space(a), space(b)
    assert (U + W).dim + (U & W).dim == U.dim + W.dim
    assert U & W <= U and U & W <= W and U <= U + W


@given(matrices(), st.randoms(use_true_random=False))
def test_echelon_form_is_canonical(a, rnd):
    rows = [QQ.vector(r) for r in a]
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    combos = [tuple(x + y for x, y in zip(shuffled[i], shuffled[i - 1])) for i in range(len(shuffled))]
    assert Subspace.span(QQ, 4, shuffled).rows == Subspace.span(QQ, 4, rows).rows
    assert Subspace.span(QQ, 4, shuffled + combos).rows == Subspace.span(QQ, 4, rows).rows


@given(matrices())
def test_rank_agrees_with_sympy(a):
    want = Matrix(a).rank() if a else 0
    assert rank(QQ, [QQ.vector(r) for r in a], 4) == want


@given(matrices(), matrices())
def test_sum_spaces_is_span_of_union(a, b):
    assert sum_spaces(QQ, 4, [space(a), space(b)]) == space(a + b)


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_membership_agrees_with_solve(a, t):
    S = space(a)
    target = QQ.vector(t)
    assert (target in S) == (solve_left(QQ, [QQ.vector(r) for r in a], target) is not None or not any(target))
