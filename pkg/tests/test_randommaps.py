import numpy as np
import pytest

from jacobian import jacobian_det_direct, jacobian_matrix_direct
from randommaps import (
    random_bcw_map,
    random_derivation,
    random_map,
    random_matrix,
    random_nilpotent_matrix,
    random_polynomial,
)
from seriescore import Series, agree
from structure import is_even, is_odd


def test_same_seed_same_instance():
    assert random_map(7, 3, 3, 5) == random_map(7, 3, 3, 5)
    assert random_derivation([1, 2, 3], 2, 4, 6) == random_derivation([1, 2, 3], 2, 4, 6)
    assert np.array_equal(random_matrix(4, 3), random_matrix(4, 3))


def test_polynomial_respects_degrees_and_variables():
    p = random_polynomial(0, 3, 6, [4], 5, variables=[1, 2])
    for exps, _ in p.items():
        assert sum(exps) == 4
        assert exps[0] == 0
    assert random_polynomial(0, 2, 3, [5]).is_zero()


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_random_map_is_tangent_to_identity(seed):
    assert random_map(seed, 3, 3, 5).is_tangent_to_identity()


@pytest.mark.parametrize("seed", [0, 1])
def test_keller_maps_have_unit_jacobian(seed):
    F = random_map(seed, 3, 3, 5, keller=True)
    assert agree(jacobian_det_direct(F), Series.constant(1, 3, 5), 4)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generator_kinds(seed):
    assert random_derivation(seed, 3, 4, 6, "divergence_free").divergence().is_zero()
    odd = random_derivation(seed, 2, 5, 6, "odd")
    assert is_odd(odd.coeffs)
    assert is_even(random_derivation(seed, 2, 4, 6, "even").coeffs)
    assert odd.min_order >= 3


def test_unknown_kind_is_rejected():
    with pytest.raises(AssertionError):
        random_derivation(0, 2, 3, 5, "quadratic")


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_nilpotent_matrix(seed):
    M = random_nilpotent_matrix(seed, 4)
    power = M @ M @ M @ M
    assert all(entry == 0 for entry in power.flat)


@pytest.mark.parametrize("nvars,d", [(2, 2), (3, 3), (4, 2)])
def test_bcw_map_has_square_zero_jacobian(nvars, d):
    H = random_bcw_map(nvars + d, nvars, d, 6)
    assert H[0].is_homogeneous() and H[0].max_total() == d
    square = jacobian_matrix_direct(H).square()
    assert all(square[i, j].is_zero() for i in range(nvars) for j in range(nvars))
