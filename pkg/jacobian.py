"""
Jacobian matrices and Jacobians, computed directly and through the
exponential formulas

    J(F_t) = exp(t(A + div a)) . 1,
    u(F_t) J(F_t) = exp(t(A + div a)) u,
    JF_t = exp(t(A + R_Ja)) . Id,   U(F_t) JF_t = exp(t(A + R_Ja)) U.
"""
import logging
from typing import Optional

from pydantic import BaseModel

from generator import infer_generator_recursive
from operators import (
    Derivation,
    SeriesMatrix,
    exp_apply_augmented_matrix,
    exp_apply_augmented_scalar,
    matrix_det,
    matrix_mul,
)
from seriescore import MapTuple, Series, agree

logger = logging.getLogger(__name__)


class KellerReport(BaseModel):
    """Jacobian-one versus divergence-free, both certified modulo degree D."""

    jac_is_one: bool
    div_is_zero: bool
    degree: int

    @property
    def consistent(self) -> bool:
        return self.jac_is_one == self.div_is_zero


def jacobian_matrix_direct(F: MapTuple) -> SeriesMatrix:
    """JF = (dF_i / dz_j); entries are exact modulo degree D - 1."""
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    return SeriesMatrix([[f.partial(j) for j in range(F.nvars)] for f in F])


def jacobian_det_direct(F: MapTuple) -> Series:
    """The Jacobian det(JF)."""
    return matrix_det(jacobian_matrix_direct(F))


def jacobian_det_exp(A: Derivation, t=1) -> Series:
    """
    J(F_t) as exp(t(A + div a)) . 1.

    Args:
        A (Derivation): Generator satisfying the exactness condition.
        t: Rational value or the symbol seriescore.T.

    Returns:
        Series: The Jacobian of the flow map, exact modulo degree D.
    """
    one = Series.constant(1, A.nvars, A.degree, A.ring)
    return exp_apply_augmented_scalar(A, A.divergence(), one, t)


def jacobian_det_exp_general(A: Derivation, u: Series, t=1) -> Series:
    """exp(t(A + div a)) u, which equals u(F_t) J(F_t)."""
    assert isinstance(u, Series), "u must be a Series."
    return exp_apply_augmented_scalar(A, A.divergence(), u, t)


def jacobian_matrix_exp(A: Derivation, U: Optional[SeriesMatrix] = None, t=1) -> SeriesMatrix:
    """
    exp(t(A + R_Ja)) U; with U = Id (the default) this is JF_t.

    Args:
        A (Derivation): Generator satisfying the exactness condition.
        U (SeriesMatrix, optional): Operand; identity when omitted.
        t: Rational value or the symbol seriescore.T.

    Returns:
        SeriesMatrix: U(F_t) JF_t.
    """
    if U is None:
        U = SeriesMatrix.identity(A.nvars, A.nvars, A.degree, A.ring)
    return exp_apply_augmented_matrix(A, A.jacobian(), U, t)


def keller_check(F: MapTuple, degree: Optional[int] = None) -> KellerReport:
    """
    Compute det(JF) == 1 and div a == 0 independently.

    Both are compared modulo degree D - 1, the precision of a derivative of
    a D-truncated series; the report states D.

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        KellerReport: The two flags and the degree.
    """
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    F.require_tangent_to_identity()
    if degree is not None:
        F = F.truncate(degree)
    D = F.degree
    certified = max(D - 1, 0)
    det = jacobian_det_direct(F).truncate(certified)
    one = Series.constant(1, F.nvars, certified, F.ring)
    A = infer_generator_recursive(F)
    divergence = A.divergence().truncate(certified)
    report = KellerReport(jac_is_one=det == one, div_is_zero=divergence.is_zero(), degree=D)
    if not report.consistent:
        logger.warning(f"Keller flags disagree modulo degree {certified}: {report}")
    logger.info(f"keller check: jac_is_one={report.jac_is_one}, div_is_zero={report.div_is_zero}")
    return report


def check_chain_rule(F: MapTuple, G: MapTuple) -> bool:
    """J(F o G) == (JF)(G) . JG modulo degree D - 1."""
    left = jacobian_matrix_direct(F.compose(G))
    right = matrix_mul(jacobian_matrix_direct(F).compose(G), jacobian_matrix_direct(G))
    return agree(left, right, max(F.degree - 1, 0))
