"""
Inference of the generator a(z) of a map F in F_1, i.e. the unique derivation
A = a(z) d/dz with o(a_i) >= 2 and F = exp(A) z.

Three independent routes are provided: a degree-by-degree solve, the
logarithm series over compositional iterates, and the explicit multi-index
recursion over homogeneous slices.
"""
import logging
import math
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel

from operators import Derivation, exp_apply, exp_flow
from seriescore import MapTuple, PrecisionError, Series

logger = logging.getLogger(__name__)


class GeneratorReport(BaseModel):
    """Outcome of re-exponentiating a generator against its map."""

    passed: bool
    components: List[bool]
    first_failure_degree: Optional[int] = None
    degree: int


def _prepare(F: MapTuple, degree: Optional[int]) -> MapTuple:
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    F.require_tangent_to_identity()
    if degree is None:
        return F
    assert isinstance(degree, int) and degree >= 1, "degree must be a positive integer."
    if degree > F.degree:
        raise PrecisionError(f"map is only known to degree {F.degree}, asked for {degree}")
    return F.truncate(degree)


def infer_generator_recursive(F: MapTuple, degree: Optional[int] = None) -> Derivation:
    """
    Solve exp(A) z = F for A degree by degree.

    At step m the slice a^(m) is F^(m) minus the degree-m slice of
    exp(A_<m) z, where A_<m holds the slices found so far; only a^(m) itself
    contributes linearly to degree m.

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        Derivation: The generator, min_order >= 2, unique modulo degree D.
    """
    F = _prepare(F, degree)
    n, D = F.nvars, F.degree
    slices = [Series.zero(n, D) for _ in range(n)]
    for m in range(2, D + 1):
        # work at truncation m so early steps stay cheap
        partial = Derivation(MapTuple(s.truncate(m) for s in slices))
        flow = exp_flow(partial)
        for i in range(n):
            residual = F[i].truncate(m).homogeneous(m) - flow[i].homogeneous(m)
            if residual:
                slices[i] = slices[i] + Series(n, D, residual.terms)
        logger.debug(f"generator slice of degree {m} solved")
    A = Derivation(MapTuple(slices))
    logger.info(f"inferred generator by recursion (n={n}, D={D})")
    return A


def infer_generator_log(F: MapTuple, degree: Optional[int] = None) -> Derivation:
    """
    a = -sum_{k>=1} (1/k) (1 - e^A)^k z, expanded over the iterates F^[j].

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        Derivation: The generator, identical to the recursive result modulo D.
    """
    F = _prepare(F, degree)
    n, D = F.nvars, F.degree
    iterates = [MapTuple.identity(n, D)]
    for _ in range(D):
        iterates.append(F.compose(iterates[-1]))
    total = MapTuple.zero(n, D)
    for k in range(1, D + 1):
        difference = MapTuple.zero(n, D)
        for j in range(k + 1):
            weight = (-1) ** j * math.comb(k, j)
            difference = difference + iterates[j].scale(weight)
        total = total - difference.scale(Fraction(1, k))
    logger.info(f"inferred generator by logarithm series (n={n}, D={D})")
    return Derivation(total)


def _compositions(total: int, parts: int, smallest: int):
    """Ordered tuples of `parts` integers >= smallest summing to `total`."""
    if parts == 1:
        if total >= smallest:
            yield (total,)
        return
    for first in range(smallest, total - smallest * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, smallest):
            yield (first,) + rest


def infer_generator_multiindex(F: MapTuple, degree: Optional[int] = None) -> Derivation:
    """
    The explicit recursion over homogeneous slices:

        a^(m) = b^(m) - sum_{r=2}^{m-1} (1/r!) sum A^(k_1) ... A^(k_r) z,

    the inner sum running over k_1 + ... + k_r = m + r - 1 with every k_j >= 2.
    Enumerates compositions, so it is only practical for small D.

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        Derivation: The generator.
    """
    F = _prepare(F, degree)
    n, D = F.nvars, F.degree
    identity = MapTuple.identity(n, D)
    found = {}
    for m in range(2, D + 1):
        correction = MapTuple.zero(n, D)
        for r in range(2, m):
            for ks in _compositions(m + r - 1, r, 2):
                word = identity
                for k in reversed(ks):
                    word = found[k].apply_map(word)
                correction = correction + word.scale(Fraction(1, math.factorial(r)))
        found[m] = Derivation(F.homogeneous(m) - correction.homogeneous(m))
    total = MapTuple.zero(n, D)
    for m in found:
        total = total + found[m].coeffs
    logger.info(f"inferred generator by multi-index recursion (n={n}, D={D})")
    return Derivation(total)


def verify_generator(F: MapTuple, A: Derivation, degree: Optional[int] = None) -> GeneratorReport:
    """
    Re-exponentiate A and compare with F component by component.

    Args:
        F (MapTuple): The map.
        A (Derivation): Candidate generator.
        degree (int, optional): Comparison degree; defaults to F's.

    Returns:
        GeneratorReport: Per-component equality and the lowest failing degree.
    """
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    assert isinstance(A, Derivation), "A must be a Derivation."
    D = F.degree if degree is None else degree
    flow = exp_flow(A.truncate(D))
    target = F.truncate(D)
    components = [flow[i] == target[i] for i in range(len(target))]
    first_failure = None
    for i, ok in enumerate(components):
        if not ok:
            order = (flow[i] - target[i]).order()
            first_failure = order if first_failure is None else min(first_failure, order)
    report = GeneratorReport(
        passed=all(components),
        components=components,
        first_failure_degree=first_failure,
        degree=D,
    )
    logger.info(f"generator verification: passed={report.passed}")
    return report


def check_composition_law(F: MapTuple, A: Derivation, g: Series) -> bool:
    """g(F(z)) == exp(A) g(z) modulo degree D."""
    return g.compose(F) == exp_apply(A, g)


def check_iterates(F: MapTuple, A: Derivation, up_to: int = 4) -> bool:
    """exp(jA) z equals the j-fold composition F^[j] for j <= up_to."""
    for j in range(up_to + 1):
        if exp_flow(A, j) != F.iterate(j):
            return False
    return True


INFER_METHODS = {
    "recursive": infer_generator_recursive,
    "log": infer_generator_log,
    "multiindex": infer_generator_multiindex,
}
