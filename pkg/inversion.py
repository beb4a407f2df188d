"""
Formal inverse G of a map F in F_1, by three independent routes.
"""
import logging
import math
from typing import Optional

from pydantic import BaseModel

from generator import infer_generator_recursive
from operators import exp_flow
from seriescore import MapTuple, PrecisionError, Series

logger = logging.getLogger(__name__)


class InversionReport(BaseModel):
    """Two-sided inverse check of G against F."""

    left_inverse: bool
    right_inverse: bool
    degree: int

    @property
    def passed(self) -> bool:
        return self.left_inverse and self.right_inverse


def _prepare(F: MapTuple, degree: Optional[int]) -> MapTuple:
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    F.require_tangent_to_identity()
    if degree is None:
        return F
    if degree > F.degree:
        raise PrecisionError(f"map is only known to degree {F.degree}, asked for {degree}")
    return F.truncate(degree)


def invert_exp(F: MapTuple, degree: Optional[int] = None) -> MapTuple:
    """
    G = exp(-A) z where A is the generator of F.

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        MapTuple: The formal inverse modulo degree D.
    """
    F = _prepare(F, degree)
    A = infer_generator_recursive(F)
    G = exp_flow(-A)
    logger.info("inverse computed as exp(-A)z")
    return G


def invert_iterates(F: MapTuple, degree: Optional[int] = None) -> MapTuple:
    """
    G = z + sum_{k>=1} (1 - e^A)^k z, expanded over the iterates F^[j].

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        MapTuple: The formal inverse modulo degree D.
    """
    F = _prepare(F, degree)
    n, D = F.nvars, F.degree
    iterates = [MapTuple.identity(n, D)]
    for _ in range(D):
        iterates.append(F.compose(iterates[-1]))
    G = MapTuple.identity(n, D)
    for k in range(1, D + 1):
        for j in range(k + 1):
            G = G + iterates[j].scale((-1) ** j * math.comb(k, j))
    logger.info("inverse computed from binomial iterate sums")
    return G


def invert_solve(F: MapTuple, degree: Optional[int] = None) -> MapTuple:
    """
    Solve F(G(z)) = z for G = z + sum_{m>=2} G^(m), one degree at a time.

    F(G + delta) = F(G) + delta + (higher order), so the degree-m residual of
    F o G fixes G^(m).

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        MapTuple: The formal inverse modulo degree D.
    """
    F = _prepare(F, degree)
    n, D = F.nvars, F.degree
    G = [Series.variable(i, n, D) for i in range(n)]
    for m in range(2, D + 1):
        inner = MapTuple(g.truncate(m) for g in G)
        outer = F.truncate(m)
        image = outer.compose(inner)
        for i in range(n):
            residual = image[i].homogeneous(m)
            if residual:
                G[i] = G[i] - Series(n, D, residual.terms)
    logger.info("inverse computed by degree-by-degree solve")
    return MapTuple(G)


def check_inverse(F: MapTuple, G: MapTuple) -> InversionReport:
    """Check F o G = z and G o F = z modulo degree D."""
    identity = MapTuple.identity(F.nvars, F.degree, F.ring)
    return InversionReport(
        left_inverse=G.compose(F) == identity,
        right_inverse=F.compose(G) == identity,
        degree=F.degree,
    )


INVERT_METHODS = {
    "exp": invert_exp,
    "iterates": invert_iterates,
    "solve": invert_solve,
}
