import pytest

import oracles
from deformation import deform
from jacobian import (
    check_chain_rule,
    jacobian_det_direct,
    jacobian_det_exp,
    jacobian_det_exp_general,
    jacobian_matrix_direct,
    jacobian_matrix_exp,
    keller_check,
)
from operators import Derivation, exp_flow
from randommaps import random_derivation, random_map, random_series, random_series_matrix
from seriescore import QQ_T, T, MapTuple, Series, agree


def test_keller_on_shear(shear):
    report = keller_check(shear)
    assert report.model_dump() == {"jac_is_one": True, "div_is_zero": True, "degree": 8}
    assert report.consistent


def test_keller_on_quadratic(quadratic):
    assert jacobian_det_direct(quadratic) == Series(1, 4, {(0,): 1, (1,): 2})
    report = keller_check(quadratic)
    assert not report.jac_is_one
    assert not report.div_is_zero
    assert report.consistent


def test_exponential_jacobian_of_shear(shear):
    A = Derivation(MapTuple([Series(2, 8, {(0, 2): 1}), Series.zero(2, 8)]))
    assert jacobian_det_exp(A) == Series.constant(1, 2, 8)


def test_symbolic_jacobian_of_quadratic_field():
    # F_t = x / (1 - t x), so J(F_t) = sum (k + 1) t^k x^k
    A = Derivation(MapTuple([Series(1, 6, {(2,): 1})]))
    J = jacobian_det_exp(A, T)
    assert J.ring is QQ_T
    for k in range(6):
        assert J.coefficient((k,)) == (k + 1) * T ** k


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_scalar_formula_matches_direct_determinant(seed):
    A = random_derivation(seed, 2, 3, 5)
    Ft = deform(A)
    assert agree(jacobian_det_exp(A, T), Ft.jacobian(), 4)
    assert agree(jacobian_det_exp(A), jacobian_det_direct(exp_flow(A)), 4)


def test_general_scalar_formula():
    A = random_derivation(4, 2, 3, 5)
    u = random_series(5, 2, 5)
    Ft = deform(A)
    left = jacobian_det_exp_general(A, u, T)
    right = u.compose(Ft.components) * Ft.jacobian()
    assert agree(left, right, 4)


@pytest.mark.parametrize("seed", [6, 7])
def test_matrix_formula(seed):
    A = random_derivation(seed, 2, 3, 5)
    U = random_series_matrix(seed + 100, 2, 5)
    Ft = deform(A)
    JFt = Ft.jacobian_matrix()
    assert agree(jacobian_matrix_exp(A, None, T), JFt, 4)
    assert agree(jacobian_matrix_exp(A, U, T), U.compose(Ft.components) @ JFt, 4)
    assert agree(jacobian_matrix_exp(A).det(), jacobian_det_exp(A), 4)


def test_direct_determinant_matches_oracle():
    F = random_map(8, 3, 3, 4)
    J = jacobian_matrix_direct(F)
    rows = [[J[i, j] for j in range(3)] for i in range(3)]
    assert jacobian_det_direct(F) == oracles.determinant(rows)


def test_divergence_free_generator_gives_unit_jacobian():
    A = random_derivation(9, 3, 3, 6, "divergence_free")
    assert A.divergence().is_zero()
    report = keller_check(exp_flow(A))
    assert report.jac_is_one and report.div_is_zero


def test_chain_rule():
    F = random_map(10, 2, 3, 5)
    G = random_map(11, 2, 3, 5)
    assert check_chain_rule(F, G)
