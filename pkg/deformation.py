"""
The deformation F_t = exp(tA) z over QQ[t], its specializations, and the flow
identities it satisfies.
"""
import logging
from fractions import Fraction
from typing import Dict

from pydantic import BaseModel

from jacobian import jacobian_det_direct, jacobian_matrix_direct
from operators import Derivation, exp_apply, exp_flow
from seriescore import QQ, QQ_T, T, MapTuple, RingError, Series, TPoly, agree

logger = logging.getLogger(__name__)


class FlowReport(BaseModel):
    """Outcome of a single flow identity."""

    name: str
    passed: bool
    degree: int


class JacobianOdeReport(BaseModel):
    """The equalities satisfied by the Jacobian of the flow."""

    time_derivative: bool
    transported_divergence: bool
    commutator: bool
    initial_slope: bool
    degree: int

    @property
    def passed(self) -> bool:
        return self.time_derivative and self.transported_divergence and self.commutator and self.initial_slope


class InitialValueReport(BaseModel):
    """Whether g(z; t) solves dg/dt = Ag, and the initial series it came from."""

    solves_flow: bool
    initial: Dict


def t_derivative(s: Series) -> Series:
    """Differentiate every QQ[t] coefficient with respect to t."""
    assert isinstance(s, Series), "s must be a Series."
    if s.ring is not QQ_T:
        raise RingError(f"t-derivative needs QQ[t] coefficients, got {s.ring}")
    return s.map_coefficients(TPoly.derivative, QQ_T)


def specialize_series(s: Series, t0) -> Series:
    """Substitute t = t0 in every coefficient, giving a series over QQ."""
    assert isinstance(s, Series), "s must be a Series."
    if s.ring is not QQ_T:
        raise RingError(f"specialization needs QQ[t] coefficients, got {s.ring}")
    t0 = Fraction(t0)
    return s.map_coefficients(lambda c: c.evaluate(t0), QQ)


class DeformedMap:
    """
    F_t = exp(tA) z with coefficients in QQ[t].

    Attributes:
        components (MapTuple): The deformed map over QQ[t].
        source (Derivation): The generator A.
    """

    def __init__(self, components: MapTuple, source: Derivation) -> None:
        """
        Args:
            components (MapTuple): Map over QQ[t].
            source (Derivation): Generator over QQ.
        """
        assert isinstance(components, MapTuple), "components must be a MapTuple."
        assert isinstance(source, Derivation), "source must be a Derivation."
        if components.ring is not QQ_T:
            raise RingError("a deformed map has QQ[t] coefficients")
        self.components = components
        self.source = source
        if source.min_order >= 2:
            self._check_degree_bound()

    def _check_degree_bound(self) -> None:
        for component in self.components:
            for exps, coeff in component.items():
                assert coeff.degree <= sum(exps) - 1, (
                    f"t-degree {coeff.degree} exceeds z-degree {sum(exps)} - 1"
                )

    @property
    def nvars(self) -> int:
        return self.components.nvars

    @property
    def degree(self) -> int:
        return self.components.degree

    def specialize(self, t0) -> MapTuple:
        """F_{t0}; t0 = k in N gives the k-fold iterate."""
        return self.components.map(lambda s: specialize_series(s, t0))

    def jacobian_matrix(self):
        return jacobian_matrix_direct(self.components)

    def jacobian(self) -> Series:
        return jacobian_det_direct(self.components)

    def to_text(self, names=None) -> str:
        return self.components.to_text(names)

    def __str__(self) -> str:
        return self.to_text()

    def to_json(self) -> dict:
        return self.components.to_json()


def deform(A: Derivation) -> DeformedMap:
    """
    Build F_t = exp(tA) z with symbolic t.

    Args:
        A (Derivation): Generator satisfying the exactness condition.

    Returns:
        DeformedMap: The one-parameter family.
    """
    flow = exp_flow(A, T)
    logger.info(f"deformation built (n={A.nvars}, D={A.degree})")
    return DeformedMap(flow, A)


def specialize(Ft: DeformedMap, t0) -> MapTuple:
    assert isinstance(Ft, DeformedMap), "Ft must be a DeformedMap."
    return Ft.specialize(t0)


def _lift(A: Derivation) -> Derivation:
    return A.change_ring(QQ_T)


def check_flow_ode(A: Derivation, u: Series) -> FlowReport:
    """d/dt exp(tA)u == A exp(tA)u over QQ[t], modulo degree D."""
    g = exp_apply(A, u, T)
    passed = t_derivative(g) == _lift(A).apply(g)
    logger.info(f"flow ODE check: passed={passed}")
    return FlowReport(name="flow_ode", passed=passed, degree=A.degree)


def check_field_transport(A: Derivation) -> FlowReport:
    """JF_t . a(z) == a(F_t) componentwise, modulo degree D."""
    Ft = deform(A)
    a_t = A.coeffs.change_ring(QQ_T)
    left = Ft.jacobian_matrix().apply(a_t)
    right = A.coeffs.compose(Ft.components)
    passed = left == right
    logger.info(f"field transport check: passed={passed}")
    return FlowReport(name="field_transport", passed=passed, degree=A.degree)


def check_jacobian_ode(A: Derivation) -> JacobianOdeReport:
    """
    The Jacobian of the flow satisfies

        d/dt J(F_t) = (A + div a) J(F_t) = (div a)(F_t) J(F_t),
        A J(F_t) = ((div a)(F_t) - div a) J(F_t),
        d/dt J(F_t) at t = 0 equals div a.

    Compared modulo degree D - 1 since J(F_t) comes from derivatives.
    """
    D = A.degree
    certified = max(D - 1, 0)
    Ft = deform(A)
    J = Ft.jacobian()
    lifted = _lift(A)
    divergence = A.divergence()
    divergence_t = divergence.change_ring(QQ_T)
    transported = divergence.compose(Ft.components)

    slope = t_derivative(J)
    middle = lifted.apply(J) + divergence_t * J
    right = transported * J
    commutator_left = lifted.apply(J)
    commutator_right = (transported - divergence_t) * J
    report = JacobianOdeReport(
        time_derivative=agree(slope, middle, certified),
        transported_divergence=agree(middle, right, certified),
        commutator=agree(commutator_left, commutator_right, certified),
        initial_slope=agree(specialize_series(slope, 0), divergence, certified),
        degree=D,
    )
    logger.info(f"jacobian ODE check: passed={report.passed}")
    return report


def check_unimodular_flow(A: Derivation) -> bool:
    """J(F_t) == 1 over QQ[t] exactly when div a == 0 (modulo degree D - 1)."""
    certified = max(A.degree - 1, 0)
    J = deform(A).jacobian().truncate(certified)
    one = Series.constant(1, A.nvars, certified, QQ_T)
    return (J == one) == A.divergence().truncate(certified).is_zero()


def check_iterate_specialization(A: Derivation, up_to: int = 3) -> bool:
    """F_t at t = j equals the j-fold composition of F_1, for j <= up_to."""
    Ft = deform(A)
    F1 = Ft.specialize(1)
    return all(Ft.specialize(j) == F1.iterate(j) for j in range(up_to + 1))


def recover_initial(A: Derivation, g: Series) -> InitialValueReport:
    """
    Compute u = exp(-tA) g(z; t) over QQ[t].

    g solves dg/dt = Ag exactly when u does not depend on t, and then
    g = exp(tA) u.

    Args:
        A (Derivation): Generator over QQ.
        g (Series): Series over QQ[t].

    Returns:
        InitialValueReport: Whether g solves the flow equation, and u at t = 0.
    """
    assert isinstance(g, Series), "g must be a Series."
    if g.ring is not QQ_T:
        raise RingError(f"recover_initial needs QQ[t] coefficients, got {g.ring}")
    lifted = _lift(A)
    minus_t = TPoly((0, -1))
    # exp(-tA) g with g itself depending on t: sum_k (-t)^k A^k g / k!
    total = g
    term = g
    for k in range(1, A.step_bound() + 1):
        term = lifted.apply(term).scale(minus_t) / k
        if term.is_zero():
            break
        total = total + term
    constant = all(c.degree <= 0 for _, c in total.items())
    u = specialize_series(total, 0)
    return InitialValueReport(solves_flow=constant, initial=u.to_json())
