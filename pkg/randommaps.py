"""
Seeded pseudorandom instances: maps in F_1, generators of several kinds,
series, series matrices, nilpotent matrices and BCW maps.

Every function takes a seed or a numpy Generator; the same seed always gives
the same instance.
"""
import logging
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Union

import numpy as np

from operators import Derivation, SeriesMatrix, exp_flow
from seriescore import MapTuple, Series

logger = logging.getLogger(__name__)

COEFFICIENTS = (-3, -2, -1, 1, 2, 3)

Seed = Union[int, list, np.random.Generator]


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _monomials(nvars: int, total: int, variables=None) -> list:
    """Exponent tuples of the given total degree, in a fixed order."""
    variables = list(range(nvars)) if variables is None else list(variables)
    out = []
    for combo in combinations_with_replacement(variables, total):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        out.append(tuple(exps))
    return out


def _coefficient(rng: np.random.Generator) -> int:
    return int(COEFFICIENTS[rng.integers(len(COEFFICIENTS))])


def random_polynomial(seed: Seed, nvars: int, degree: int, degrees, max_terms: int = 3, variables=None) -> Series:
    """
    Sparse polynomial with integer coefficients in [-3, 3].

    Args:
        seed: Seed or Generator.
        nvars (int): Number of variables.
        degree (int): Truncation degree of the result.
        degrees: Allowed total degrees of the terms.
        max_terms (int): Upper bound on the number of terms drawn.
        variables: Indices the terms may involve; all when omitted.

    Returns:
        Series: The polynomial (possibly zero after cancellation).
    """
    rng = _rng(seed)
    degrees = [d for d in degrees if d <= degree]
    terms = {}
    if not degrees:
        return Series(nvars, degree)
    for _ in range(int(rng.integers(1, max_terms + 1))):
        total = int(degrees[rng.integers(len(degrees))])
        monomials = _monomials(nvars, total, variables)
        exps = monomials[rng.integers(len(monomials))]
        terms[exps] = terms.get(exps, 0) + _coefficient(rng)
    return Series(nvars, degree, terms)


def random_series(seed: Seed, nvars: int, degree: int, max_terms: int = 4) -> Series:
    """Sparse series with terms of every degree 0..D allowed, constant included."""
    return random_polynomial(seed, nvars, degree, range(degree + 1), max_terms)


def random_series_matrix(seed: Seed, nvars: int, degree: int) -> SeriesMatrix:
    rng = _rng(seed)
    return SeriesMatrix([[random_series(rng, nvars, degree, 2) for _ in range(nvars)] for _ in range(nvars)])


def _hamiltonian(rng: np.random.Generator, nvars: int, degree: int, max_deg: int) -> MapTuple:
    """Sum over pairs i < j of dh/dz_j d/dz_i - dh/dz_i d/dz_j; divergence zero."""
    components = [Series(nvars, degree) for _ in range(nvars)]
    for i in range(nvars):
        for j in range(i + 1, nvars):
            if rng.random() < 0.3 and nvars > 2:
                continue
            h = random_polynomial(rng, nvars, degree, range(3, max_deg + 2), 2)
            components[i] = components[i] + h.partial(j)
            components[j] = components[j] - h.partial(i)
    return MapTuple(components)


def random_derivation(seed: Seed, nvars: int, max_deg: int, degree: int, kind: str = "generic") -> Derivation:
    """
    Random generator A = a(z) d/dz with every a_i of order >= 2.

    Args:
        seed: Seed or Generator.
        nvars (int): Number of variables.
        max_deg (int): Largest polynomial degree of the a_i (at least 2).
        degree (int): Truncation degree D.
        kind (str): 'generic', 'divergence_free' (Hamiltonian fields),
            'odd' or 'even' (only odd or even total degrees).

    Returns:
        Derivation: The generator.
    """
    assert kind in ("generic", "divergence_free", "odd", "even"), f"unknown kind '{kind}'."
    assert max_deg >= 2, "max_deg must be at least 2."
    rng = _rng(seed)
    if kind == "divergence_free":
        return Derivation(_hamiltonian(rng, nvars, degree, max_deg))
    if kind == "odd":
        degrees = [d for d in range(3, max(max_deg, 3) + 1) if d % 2]
    elif kind == "even":
        degrees = [d for d in range(2, max_deg + 1) if d % 2 == 0]
    else:
        degrees = list(range(2, max_deg + 1))
    return Derivation(MapTuple(random_polynomial(rng, nvars, degree, degrees) for _ in range(nvars)))


def random_map(seed: Seed, nvars: int, max_deg: int, degree: int, keller: bool = False) -> MapTuple:
    """
    Random map F in F_1.

    Args:
        seed: Seed or Generator.
        nvars (int): Number of variables.
        max_deg (int): Largest polynomial degree used (at least 2).
        degree (int): Truncation degree D.
        keller (bool): Build F = exp(A) z from a divergence-free A, so that
            det JF = 1; otherwise F = z + a sparse polynomial.

    Returns:
        MapTuple: The map.
    """
    assert max_deg >= 2, "max_deg must be at least 2."
    rng = _rng(seed)
    if keller:
        F = exp_flow(random_derivation(rng, nvars, max_deg, degree, "divergence_free"))
    else:
        identity = MapTuple.identity(nvars, degree)
        F = identity + MapTuple(random_polynomial(rng, nvars, degree, range(2, max_deg + 1)) for _ in range(nvars))
    logger.debug(f"random map (n={nvars}, keller={keller}): {F}")
    return F


def _unit_triangular_inverse(matrix: np.ndarray) -> np.ndarray:
    """(I + N)^-1 = sum_k (-N)^k for nilpotent N."""
    n = matrix.shape[0]
    identity = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    step = identity - matrix
    total = identity.copy()
    power = identity.copy()
    for _ in range(n):
        power = power @ step
        total = total + power
    return total


def random_nilpotent_matrix(seed: Seed, n: int) -> np.ndarray:
    """Strictly upper triangular integer matrix conjugated by a unimodular one."""
    rng = _rng(seed)

    def unit_triangular(upper: bool) -> np.ndarray:
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                if i == j:
                    out[i, j] = Fraction(1)
                elif (i < j) == upper:
                    out[i, j] = Fraction(int(rng.integers(-1, 2)))
                else:
                    out[i, j] = Fraction(0)
        return out

    strict = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            strict[i, j] = Fraction(int(rng.integers(-3, 4))) if j > i else Fraction(0)
    U = unit_triangular(True)
    L = unit_triangular(False)
    P = U @ L
    P_inv = _unit_triangular_inverse(L) @ _unit_triangular_inverse(U)
    return P @ strict @ P_inv


def random_matrix(seed: Seed, n: int, low: float = -1.0, high: float = 1.0) -> np.ndarray:
    """Float matrix with entries uniform in [low, high]."""
    return _rng(seed).uniform(low, high, size=(n, n))


def random_bcw_map(seed: Seed, nvars: int, d: int, degree: int) -> MapTuple:
    """
    H = (p(z2, ..., zn), 0, ..., 0) with p homogeneous of degree d, so that
    JH has a single nonzero row with a zero first entry and (JH)^2 = 0.
    """
    assert nvars >= 2, "the BCW construction needs at least two variables."
    assert 2 <= d <= degree, "d must lie between 2 and the truncation degree."
    rng = _rng(seed)
    p = Series(nvars, degree)
    while p.is_zero():
        p = random_polynomial(rng, nvars, degree, [d], 3, variables=range(1, nvars))
    return MapTuple([p] + [Series(nvars, degree) for _ in range(nvars - 1)])
