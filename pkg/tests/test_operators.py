import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

import oracles
from operators import (
    ConvergenceError,
    Derivation,
    ExactnessError,
    SeriesMatrix,
    check_automorphism,
    exp_apply,
    exp_apply_augmented_matrix,
    exp_flow,
    exp_numeric,
    is_nilpotent,
    matrix_det,
    matrix_mul,
    permutation_det,
)
from randommaps import random_derivation, random_series, random_series_matrix
from seriescore import QQ_T, T, MapTuple, RingError, Series, TPoly, agree
from structure import phi_embed


def field(nvars, degree, *components):
    return Derivation(MapTuple(Series(nvars, degree, c) for c in components))


def test_shear_flow_terminates_after_two_terms():
    A = field(2, 8, {(0, 2): 1}, {})
    z1 = Series.variable(0, 2, 8)
    assert A.apply(A.apply(z1)).is_zero()
    assert exp_flow(A) == MapTuple([Series(2, 8, {(1, 0): 1, (0, 2): 1}), Series.variable(1, 2, 8)])


def test_quadratic_field_gives_geometric_series():
    A = field(1, 6, {(2,): 1})
    flow = exp_flow(A)
    assert flow[0] == Series(1, 6, {(k,): 1 for k in range(1, 7)})
    symbolic = exp_flow(A, T)
    assert symbolic.ring is QQ_T
    for k in range(1, 7):
        assert symbolic[0].coefficient((k,)) == T ** (k - 1)


def test_rational_time():
    A = field(1, 4, {(2,): 1})
    half = exp_flow(A, Fraction(1, 2))
    assert half[0] == Series(1, 4, {(1,): 1, (2,): Fraction(1, 2), (3,): Fraction(1, 4), (4,): Fraction(1, 8)})


def test_nilpotent_linear_part():
    A = field(2, 4, {(0, 1): 1}, {})
    assert A.exactness() == "nilpotent"
    assert exp_flow(A) == MapTuple([Series(2, 4, {(1, 0): 1, (0, 1): 1}), Series.variable(1, 2, 4)])


def test_non_nilpotent_linear_part_needs_numeric():
    A = field(1, 3, {(1,): 1})
    assert A.exactness() is None
    with pytest.raises(ExactnessError):
        exp_flow(A)
    result = exp_numeric(A, Series.variable(0, 1, 3))
    assert result.coefficient((1,)) == pytest.approx(math.e, abs=1e-12)


def test_numeric_reports_divergence():
    A = field(1, 3, {(1,): 1})
    with pytest.raises(ConvergenceError) as info:
        exp_numeric(A, Series.variable(0, 1, 3), kmax=3)
    assert info.value.steps == 3
    assert info.value.norm == pytest.approx(1 / 6)
    assert info.value.partial.coefficient((1,)) == pytest.approx(1 + 1 + 1 / 2 + 1 / 6)


def test_constant_fields_are_rejected():
    with pytest.raises(ExactnessError):
        field(1, 3, {(0,): 1})


def test_float_time_is_rejected():
    A = field(1, 3, {(2,): 1})
    with pytest.raises(RingError):
        exp_apply(A, Series.variable(0, 1, 3), 0.5)


def test_divergence_and_jacobian():
    A = field(2, 4, {(2, 0): 1}, {(1, 1): 1})
    assert A.divergence() == Series(2, 4, {(1, 0): 3})
    Ja = A.jacobian()
    assert Ja[0, 0] == Series(2, 4, {(1, 0): 2})
    assert Ja[1, 0] == Series(2, 4, {(0, 1): 1})
    assert Ja[1, 1] == Series(2, 4, {(1, 0): 1})
    assert Ja[0, 1].is_zero()


def test_bracket():
    A = field(1, 6, {(2,): 1})
    B = field(1, 6, {(3,): 1})
    assert A.bracket(B) == field(1, 6, {(4,): 1})
    assert B.bracket(A) == -A.bracket(B)


def test_augmented_matrix_exponential_on_shear():
    A = field(2, 6, {(0, 2): 1}, {})
    identity = SeriesMatrix.identity(2, 2, 6)
    result = exp_apply_augmented_matrix(A, A.jacobian(), identity)
    one = Series.constant(1, 2, 6)
    assert result == SeriesMatrix([[one, Series(2, 6, {(0, 1): 2})], [Series.zero(2, 6), one]])


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_exponential_is_an_automorphism(seed):
    A = random_derivation([seed, 0], 2, 3, 5)
    u = random_series([seed, 1], 2, 5)
    v = random_series([seed, 2], 2, 5)
    assert check_automorphism(A, u, v)
    assert check_automorphism(A, u, v, T)


def test_exponential_group_law():
    A = random_derivation(7, 2, 3, 5)
    u = random_series(8, 2, 5)
    assert exp_apply(A, exp_apply(A, u), 1) == exp_apply(A, u, 2)
    assert exp_apply(A, exp_apply(A, u), -1) == u


def test_determinant_matches_dense_oracle():
    U = random_series_matrix(11, 3, 3)
    rows = [[U[i, j] for j in range(3)] for i in range(3)]
    assert U.det() == oracles.determinant(rows)


def test_memoized_determinant_matches_permutation_sum():
    U = random_series_matrix(12, 5, 3)
    assert U.det() == permutation_det(U)


def test_matrix_product():
    x = Series.variable(0, 1, 3)
    one = Series.constant(1, 1, 3)
    zero = Series.zero(1, 3)
    P = SeriesMatrix([[one, x], [zero, one]])
    assert P @ P == SeriesMatrix([[one, x + x], [zero, one]])
    assert (P @ P).det() == one


def test_nilpotency_test():
    assert is_nilpotent(np.array([[0, 1], [0, 0]], dtype=object))
    assert not is_nilpotent(np.array([[1, 0], [0, 0]], dtype=object))


def test_tpoly_time_derivative_bound():
    A = field(1, 5, {(2,): 1, (3,): 1})
    flow = exp_flow(A, T)
    for exps, coeff in flow[0].items():
        assert isinstance(coeff, TPoly)
        assert coeff.degree <= sum(exps) - 1


@pytest.mark.parametrize("seed", [20, 21, 22])
def test_derivation_obeys_leibniz(seed):
    A = random_derivation([seed, 0], 3, 3, 6)
    u = random_series([seed, 1], 3, 6)
    v = random_series([seed, 2], 3, 6)
    assert agree(A.apply(u * v), A.apply(u) * v + u * A.apply(v), 5)


def test_numeric_exponential_of_general_linear_field():
    M = np.array([[0.3, -1.2], [0.8, 0.5]])
    A = phi_embed(M, degree=1)
    expected = expm(M)
    for i in range(2):
        result = exp_numeric(A, Series.variable(i, 2, 1), eps=1e-15)
        for j in range(2):
            exps = tuple(1 if k == j else 0 for k in range(2))
            assert result.coefficient(exps) == pytest.approx(expected[i, j], abs=1e-9)


def test_nilpotent_linear_field_terminates_numerically():
    M = np.array([[0.0, 1.0], [0.0, 0.0]])
    result = exp_numeric(phi_embed(M, degree=1), Series.variable(0, 2, 1))
    assert result.coefficient((1, 0)) == 1.0
    assert result.coefficient((0, 1)) == 1.0


def test_named_matrix_operations():
    U = random_series_matrix(30, 2, 4)
    V = random_series_matrix(31, 2, 4)
    assert matrix_mul(U, V) == U @ V
    assert matrix_det(matrix_mul(U, V)) == matrix_det(U) * matrix_det(V)
    assert matrix_det(SeriesMatrix.identity(3, 2, 4)) == Series.constant(1, 2, 4)
