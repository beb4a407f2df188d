"""
Special cases: parity of maps and generators, the nilpotent homogeneous case
F = z + H with (JH)^2 = 0, the linear embedding of matrices into derivations,
and Liouville's formula det e^M = e^{tr M}.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel

from generator import infer_generator_recursive
from inversion import invert_solve
from jacobian import jacobian_matrix_direct
from operators import (
    NUMERIC_EPS,
    NUMERIC_KMAX,
    Derivation,
    ExactnessError,
    SeriesMatrix,
    exp_flow,
    exp_numeric,
    is_nilpotent,
)
from seriescore import QQ, RR, JetflowError, MapTuple, Series

logger = logging.getLogger(__name__)

LIOUVILLE_TOLERANCE = 1e-9

# ConstantMatrix: a square 2-D numpy array, dtype object holding Fractions in
# exact mode, float64 in numeric mode.
ConstantMatrix = np.ndarray


class NotHomogeneousError(JetflowError):
    """The map is not homogeneous of a single degree >= 2."""


class ParityReport(BaseModel):
    """Parity flags of a map, its generator and its inverse."""

    F_odd: bool
    a_odd: bool
    a_even: bool
    G_equals_minus_F_minus: bool
    divergence_free: bool
    even_polynomial_divergence_free: Optional[bool] = None
    degree: int

    @property
    def consistent(self) -> bool:
        return self.F_odd == self.a_odd and self.G_equals_minus_F_minus == self.a_even


class BCWReport(BaseModel):
    """Outcome of the (JH)^2 = 0 case."""

    nilpotent: bool
    G: Optional[Dict] = None
    inverse_ok: Optional[bool] = None
    a_equals_H: Optional[bool] = None
    vanishing_slices: Optional[List[int]] = None
    slices_vanish: Optional[bool] = None
    degree: int

    @property
    def passed(self) -> bool:
        if not self.nilpotent:
            return True
        return bool(self.inverse_ok and self.a_equals_H and self.slices_vanish)


class LiouvilleReport(BaseModel):
    """det(e^M) against e^{tr M}, with the intermediate claims."""

    mode: str
    det_exp: str
    exp_trace: str
    max_abs_error: Union[float, str]
    relative_error: Optional[float] = None
    linear: bool
    jacobian_is_exp: bool
    trace_divergence: bool
    passed: bool


def as_constant_matrix(rows, exact: bool = True) -> ConstantMatrix:
    """Build a ConstantMatrix from nested lists (Fractions or floats)."""
    if exact:
        matrix = np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
    else:
        matrix = np.array(rows, dtype=float)
    assert matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1], "matrix must be square."
    return matrix


def is_odd(F: MapTuple) -> bool:
    """F(-z) == -F(z)."""
    return F.reflect() == -F


def is_even(F: MapTuple) -> bool:
    """F(-z) == F(z)."""
    return F.reflect() == F


def parity_check(F: MapTuple, degree: Optional[int] = None) -> ParityReport:
    """
    Compute parity flags independently.

    F odd holds exactly when a is odd, and G(z) = -F(-z) exactly when a is
    even. When F is a polynomial of degree below D and a is even, the
    divergence of a vanishes.

    Args:
        F (MapTuple): Map in F_1.
        degree (int, optional): Truncation degree; defaults to F's.

    Returns:
        ParityReport: The flags.
    """
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    F.require_tangent_to_identity()
    if degree is not None:
        F = F.truncate(degree)
    A = infer_generator_recursive(F)
    G = invert_solve(F)
    a_even = is_even(A.coeffs)
    divergence_free = A.divergence().truncate(max(F.degree - 1, 0)).is_zero()
    polynomial = max(c.max_total() for c in F) < F.degree
    report = ParityReport(
        F_odd=is_odd(F),
        a_odd=is_odd(A.coeffs),
        a_even=a_even,
        G_equals_minus_F_minus=G == -F.reflect(),
        divergence_free=divergence_free,
        even_polynomial_divergence_free=(divergence_free if a_even and polynomial else None),
        degree=F.degree,
    )
    logger.info(f"parity check: {report}")
    return report


def bcw_case(H: MapTuple, degree: Optional[int] = None) -> BCWReport:
    """
    For H homogeneous of degree d >= 2 with (JH)^2 = 0, the inverse of
    F = z + H is z - H and the generator of F is H itself.

    Args:
        H (MapTuple): Homogeneous map without constant or linear part.
        degree (int, optional): Truncation degree; defaults to H's.

    Returns:
        BCWReport: Nilpotency and, when it holds, the verified claims.

    Raises:
        NotHomogeneousError: H mixes degrees or has degree < 2.
    """
    assert isinstance(H, MapTuple), "H must be a MapTuple."
    if degree is not None:
        H = H.truncate(degree)
    D = H.degree
    degrees = {sum(e) for c in H for e, _ in c.items()}
    if len(degrees) > 1 or (degrees and min(degrees) < 2):
        raise NotHomogeneousError(f"H must be homogeneous of one degree >= 2, found degrees {sorted(degrees)}")
    d = degrees.pop() if degrees else None

    # (JH)^2 has degree 2d - 2, which may exceed D
    room = D if d is None else max(D, 2 * d - 2)
    square = jacobian_matrix_direct(MapTuple(Series(H.nvars, room, c.terms) for c in H)).square()
    nilpotent = square.is_zero()
    if not nilpotent:
        logger.info("BCW case: (JH)^2 != 0, no claim made")
        return BCWReport(nilpotent=False, degree=D)

    identity = MapTuple.identity(H.nvars, D)
    F = identity + H
    G = identity - H
    inverse_ok = F.compose(G) == identity and G.compose(F) == identity
    A = infer_generator_recursive(F)
    a_equals_H = A.coeffs == H
    # slices of degree m(d - 1) + 1, m >= 2, that fit below D
    checked = [] if d is None else [m * (d - 1) + 1 for m in range(2, D + 1) if m * (d - 1) + 1 <= D]
    zero = MapTuple.zero(H.nvars, D)
    vanishing = [k for k in checked if A.coeffs.homogeneous(k) == zero]
    logger.info(f"BCW case: inverse_ok={inverse_ok}, a_equals_H={a_equals_H}")
    return BCWReport(
        nilpotent=True,
        G=G.to_json(),
        inverse_ok=inverse_ok,
        a_equals_H=a_equals_H,
        vanishing_slices=vanishing,
        slices_vanish=len(vanishing) == len(checked),
        degree=D,
    )


def phi_embed(M: ConstantMatrix, degree: int = 1, convention: str = "jacobian") -> Derivation:
    """
    Linear derivation attached to a constant matrix.

    Args:
        M (ConstantMatrix): Square matrix.
        degree (int): Truncation degree of the result.
        convention (str): 'jacobian' gives a_i = sum_j M[i][j] z_j, so that
            J(Phi(M)) = M; 'literal' gives sum_ij M[i][j] z_i d/dz_j, i.e.
            a = M^T z.

    Returns:
        Derivation: Phi(M).
    """
    assert isinstance(M, np.ndarray) and M.ndim == 2, "M must be a 2-D numpy array."
    assert convention in ("jacobian", "literal"), "convention must be 'jacobian' or 'literal'."
    matrix = M if convention == "jacobian" else M.T
    n = matrix.shape[0]
    ring = QQ if matrix.dtype == object else RR
    components = []
    for i in range(n):
        terms = {tuple(1 if k == j else 0 for k in range(n)): matrix[i, j] for j in range(n)}
        components.append(Series(n, degree, terms, ring))
    return Derivation(MapTuple(components))


def commutator(M: ConstantMatrix, N: ConstantMatrix) -> ConstantMatrix:
    return M @ N - N @ M


def check_phi_homomorphism(M: ConstantMatrix, N: ConstantMatrix) -> Dict[str, bool]:
    """
    Compare Phi([M, N]) with the operator commutator of Phi(M) and Phi(N).

    With a = Mz the operator commutator reverses the order:
    [Phi(M), Phi(N)] = Phi([N, M]). With the literal reading a = M^T z the
    map is a homomorphism in the usual order.
    """
    bracket = commutator(M, N)
    jac_left = phi_embed(bracket)
    jac_right = phi_embed(N).bracket(phi_embed(M))
    lit_left = phi_embed(bracket, convention="literal")
    lit_right = phi_embed(M, convention="literal").bracket(phi_embed(N, convention="literal"))
    return {
        "jacobian_reversed": jac_left == jac_right,
        "literal_homomorphism": lit_left == lit_right,
    }


def check_phi_injective(n: int) -> bool:
    """Phi sends the basis matrices E_ij to distinct, nonzero derivations with J = E_ij."""
    seen = set()
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=object)
            E[:, :] = Fraction(0)
            E[i, j] = Fraction(1)
            A = phi_embed(E)
            if A.is_zero() or A in seen:
                return False
            if not np.array_equal(A.linear_part(), E):
                return False
            seen.add(A)
    return True


def exact_nilpotent_exp(M: ConstantMatrix) -> ConstantMatrix:
    """e^M as a finite sum for a nilpotent exact matrix."""
    if not is_nilpotent(M):
        raise ExactnessError("exact matrix exponential needs a nilpotent matrix")
    n = M.shape[0]
    total = as_constant_matrix(np.identity(n, dtype=int).tolist())
    term = total.copy()
    for k in range(1, n + 1):
        term = (term @ M) / k
        total = total + term
    return total


def expm_scaling_squaring(M: np.ndarray, ntaylor: int = 12, nsquare: int = 10) -> np.ndarray:
    """Matrix exponential by a truncated Taylor series and repeated squaring."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    scaled = M / 2.0 ** nsquare
    coefficients = np.zeros(ntaylor + 1)
    coefficients[0] = 1.0
    for i in range(ntaylor):
        coefficients[i + 1] = coefficients[i] / (i + 1)
    result = np.identity(n) * coefficients[ntaylor]
    for i in range(ntaylor - 1, -1, -1):
        result = scaled @ result + np.identity(n) * coefficients[i]
    for _ in range(nsquare):
        result = result @ result
    return result


def _linear_matrix(F: MapTuple) -> np.ndarray:
    n = F.nvars
    matrix = np.empty((n, n), dtype=object)
    for i, f in enumerate(F):
        for j in range(n):
            matrix[i, j] = f.coefficient(tuple(1 if k == j else 0 for k in range(n)))
    return matrix


def liouville_check(M: ConstantMatrix, mode: str = "exact", eps: float = NUMERIC_EPS, kmax: int = NUMERIC_KMAX) -> LiouvilleReport:
    """
    Recover det e^M = e^{tr M} from the flow of Phi(M).

    Exact mode needs a nilpotent M (trace zero, so both sides equal 1); numeric
    mode runs the float exponential and compares with the scaling-and-squaring
    oracle within LIOUVILLE_TOLERANCE.

    Args:
        M (ConstantMatrix): Square matrix.
        mode (str): 'exact' or 'numeric'.
        eps (float): Numeric stopping tolerance.
        kmax (int): Numeric term cap.

    Returns:
        LiouvilleReport: Both sides of the formula and the intermediate claims.
    """
    assert mode in ("exact", "numeric"), "mode must be 'exact' or 'numeric'."
    n = M.shape[0]
    if mode == "exact":
        M = as_constant_matrix(M.tolist())
        if not is_nilpotent(M):
            raise ExactnessError("exact Liouville check needs a nilpotent matrix")
        A = phi_embed(M, degree=2)
        F = exp_flow(A)
        linear = all(c.is_homogeneous() and c.max_total() <= 1 for c in F)
        expected = exact_nilpotent_exp(M)
        JF = jacobian_matrix_direct(F).truncate(1)
        jacobian_is_exp = JF == SeriesMatrix.from_constant(expected, n, 1)
        linear = linear and np.array_equal(_linear_matrix(F), expected)
        det = JF.det().coefficient((0,) * n)
        trace = sum(M[i, i] for i in range(n))
        trace_divergence = A.divergence().truncate(0) == Series.constant(trace, n, 0)
        exp_trace = Fraction(1) if trace == 0 else None
        passed = linear and jacobian_is_exp and trace_divergence and det == exp_trace
        report = LiouvilleReport(
            mode="exact",
            det_exp=str(det),
            exp_trace=str(exp_trace),
            max_abs_error="0" if det == exp_trace else str(abs(det - exp_trace)),
            linear=linear,
            jacobian_is_exp=jacobian_is_exp,
            trace_divergence=trace_divergence,
            passed=passed,
        )
    else:
        M = np.asarray(M, dtype=float)
        A = phi_embed(M, degree=1)
        identity = MapTuple.identity(n, 1)
        F = MapTuple(exp_numeric(A, z, 1.0, eps, kmax) for z in identity)
        linear = all(c.max_total() <= 1 and c.order() >= 1 for c in F)
        matrix = _linear_matrix(F).astype(float)
        oracle = expm_scaling_squaring(M)
        det = float(np.linalg.det(matrix))
        exp_trace = math.exp(float(np.trace(M)))
        error = abs(det - exp_trace)
        entry_error = float(np.max(np.abs(matrix - oracle)))
        scale = max(1.0, abs(exp_trace), float(np.max(np.abs(oracle))))
        trace_divergence = abs(
            A.divergence().coefficient((0,) * n) - float(np.trace(M))
        ) <= LIOUVILLE_TOLERANCE
        jacobian_is_exp = entry_error <= LIOUVILLE_TOLERANCE
        report = LiouvilleReport(
            mode="numeric",
            det_exp=repr(det),
            exp_trace=repr(exp_trace),
            max_abs_error=error,
            relative_error=max(error, entry_error) / scale,
            linear=linear,
            jacobian_is_exp=jacobian_is_exp,
            trace_divergence=trace_divergence,
            passed=linear and jacobian_is_exp and trace_divergence and error <= LIOUVILLE_TOLERANCE,
        )
    logger.info(f"Liouville check ({report.mode}): passed={report.passed}")
    return report
