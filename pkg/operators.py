"""
Derivations A = a(z) d/dz, series matrices, and truncated exponentials.

The exact engine sums exp(tL)u = sum_k t^k L^k u / k! for L in {A, A + g, A + R_Ja}
and stops at the first vanishing term. That happens after at most D + 1 terms
when every a_i has order >= 2, and after finitely many terms when the linear
part of a is a nilpotent matrix. Anything else goes through exp_numeric.
"""
import logging
import math
from fractions import Fraction
from itertools import permutations

import numpy as np

from seriescore import (
    QQ,
    QQ_T,
    RR,
    JetflowError,
    MapTuple,
    MismatchError,
    RingError,
    Series,
    TPoly,
)

logger = logging.getLogger(__name__)

NUMERIC_EPS = 1e-13
NUMERIC_KMAX = 500


class ExactnessError(JetflowError):
    """The exponential does not terminate in exact arithmetic."""


class ConvergenceError(JetflowError):
    """The numeric exponential hit kmax before the terms dropped below eps."""

    def __init__(self, message: str, partial, norm: float, steps: int) -> None:
        super().__init__(message)
        self.partial = partial
        self.norm = norm
        self.steps = steps


def is_nilpotent(matrix: np.ndarray) -> bool:
    """Exact nilpotency test: M^n == 0 for an n x n matrix."""
    assert isinstance(matrix, np.ndarray) and matrix.ndim == 2, "matrix must be a 2-D numpy array."
    n = matrix.shape[0]
    power = np.identity(n, dtype=object) if matrix.dtype == object else np.identity(n)
    for _ in range(n):
        power = power @ matrix
    return not any(bool(x) for x in power.flat)


class SeriesMatrix:
    """
    Square matrix of series with common nvars, degree and ring.

    Attributes:
        n (int): Dimension.
        entries (tuple): Rows of Series.
    """

    __slots__ = ("n", "entries")

    def __init__(self, entries) -> None:
        rows = tuple(tuple(row) for row in entries)
        assert rows, "matrix must have at least one row."
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise MismatchError("series matrix must be square")
        first = rows[0][0]
        for row in rows:
            for s in row:
                assert isinstance(s, Series), "entries must be Series."
                if s.nvars != first.nvars or s.degree != first.degree or s.ring is not first.ring:
                    raise MismatchError("matrix entries must share nvars, degree and ring")
        self.n = n
        self.entries = rows

    @classmethod
    def identity(cls, n: int, nvars: int, degree: int, ring=QQ) -> "SeriesMatrix":
        one = Series.constant(1, nvars, degree, ring)
        zero = Series.zero(nvars, degree, ring)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_constant(cls, matrix: np.ndarray, nvars: int, degree: int, ring=QQ) -> "SeriesMatrix":
        return cls(
            [[Series.constant(x, nvars, degree, ring) for x in row] for row in matrix.tolist()]
        )

    @property
    def nvars(self) -> int:
        return self.entries[0][0].nvars

    @property
    def degree(self) -> int:
        return self.entries[0][0].degree

    @property
    def ring(self):
        return self.entries[0][0].ring

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def _check(self, other: "SeriesMatrix") -> None:
        if not isinstance(other, SeriesMatrix):
            raise MismatchError(f"expected a SeriesMatrix, got {type(other).__name__}")
        if self.n != other.n:
            raise MismatchError(f"matrix dimensions differ: {self.n} vs {other.n}")

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix([[fn(s) for s in row] for row in self.entries])

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        return SeriesMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return self + other.scale(-1)

    def scale(self, factor) -> "SeriesMatrix":
        return self.map(lambda s: s.scale(factor))

    def __truediv__(self, divisor) -> "SeriesMatrix":
        return self.map(lambda s: s / divisor)

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        """Truncated matrix product."""
        self._check(other)
        zero = Series.zero(self.nvars, self.degree, self.ring)
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                total = zero
                for k in range(self.n):
                    left = self.entries[i][k]
                    right = other.entries[k][j]
                    if left and right:
                        total = total + left * right
                row.append(total)
            rows.append(row)
        return SeriesMatrix(rows)

    def apply(self, vector: MapTuple) -> MapTuple:
        """Matrix-vector product with a tuple of series."""
        assert isinstance(vector, MapTuple), "vector must be a MapTuple."
        if len(vector) != self.n:
            raise MismatchError(f"vector length {len(vector)} does not match dimension {self.n}")
        zero = Series.zero(self.nvars, self.degree, self.ring)
        return MapTuple(
            sum((self.entries[i][k] * vector[k] for k in range(self.n)), zero) for i in range(self.n)
        )

    def det(self) -> Series:
        """
        Determinant by Laplace expansion along rows.

        For n <= 4 the expansion is done directly; above that, minors are
        memoized by their column sets so each minor is expanded once.
        """
        n = self.n
        zero = Series.zero(self.nvars, self.degree, self.ring)
        memo = {} if n > 4 else None

        def expand(row: int, cols: tuple) -> Series:
            if row == n:
                return Series.constant(1, self.nvars, self.degree, self.ring)
            if memo is not None and cols in memo:
                return memo[cols]
            total = zero
            for position, col in enumerate(cols):
                entry = self.entries[row][col]
                if not entry:
                    continue
                minor = expand(row + 1, cols[:position] + cols[position + 1:])
                term = entry * minor
                total = total - term if position % 2 else total + term
            if memo is not None:
                memo[cols] = total
            return total

        return expand(0, tuple(range(n)))

    def square(self) -> "SeriesMatrix":
        return self @ self

    def is_zero(self) -> bool:
        return all(s.is_zero() for row in self.entries for s in row)

    def truncate(self, degree: int) -> "SeriesMatrix":
        return self.map(lambda s: s.truncate(degree))

    def change_ring(self, ring) -> "SeriesMatrix":
        return self.map(lambda s: s.change_ring(ring))

    def compose(self, inner: MapTuple) -> "SeriesMatrix":
        """Entrywise substitution U(F)."""
        return self.map(lambda s: s.compose(inner))

    def constant_part(self) -> np.ndarray:
        """Matrix of constant terms (object array)."""
        origin = (0,) * self.nvars
        return np.array(
            [[s.coefficient(origin) for s in row] for row in self.entries], dtype=object
        )

    def to_text(self, names=None) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(s.to_text(names) for s in row) + "]" for row in self.entries
        ) + "]"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"SeriesMatrix{self.to_text()}"

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[s.to_json() for s in row] for row in self.entries]}

    @classmethod
    def from_json(cls, obj: dict, ring=None) -> "SeriesMatrix":
        assert isinstance(obj, dict), "obj must be a dictionary."
        return cls([[Series.from_json(s, ring) for s in row] for row in obj["entries"]])


def permutation_det(matrix: SeriesMatrix) -> Series:
    """Leibniz permutation-sum determinant; slow, kept as a cross-check."""
    n = matrix.n
    total = Series.zero(matrix.nvars, matrix.degree, matrix.ring)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Series.constant(1, matrix.nvars, matrix.degree, matrix.ring)
        for i in range(n):
            term = term * matrix.entries[i][perm[i]]
        total = total - term if inversions % 2 else total + term
    return total


class Derivation:
    """
    The derivation A = sum_i a_i(z) d/dz_i.

    Attributes:
        coeffs (MapTuple): The tuple a = (a_1, ..., a_n).
        min_order: Smallest order over the components (math.inf for A = 0).
    """

    __slots__ = ("coeffs", "min_order")

    def __init__(self, coeffs: MapTuple) -> None:
        """
        Args:
            coeffs (MapTuple): Components a_i; constant vector fields are rejected.
        """
        assert isinstance(coeffs, MapTuple), "coeffs must be a MapTuple."
        self.coeffs = coeffs
        self.min_order = coeffs.order()
        if self.min_order < 1:
            raise ExactnessError("constant vector fields are not supported (a(0) must be 0)")

    @classmethod
    def zero(cls, nvars: int, degree: int, ring=QQ) -> "Derivation":
        return cls(MapTuple.zero(nvars, degree, ring))

    @classmethod
    def from_components(cls, components) -> "Derivation":
        return cls(MapTuple(components))

    @property
    def nvars(self) -> int:
        return self.coeffs.nvars

    @property
    def degree(self) -> int:
        return self.coeffs.degree

    @property
    def ring(self):
        return self.coeffs.ring

    def __getitem__(self, index: int) -> Series:
        return self.coeffs[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "Derivation":
        return Derivation(-self.coeffs)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.coeffs + other.coeffs)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.coeffs - other.coeffs)

    def scale(self, factor) -> "Derivation":
        return Derivation(self.coeffs.scale(factor))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def truncate(self, degree: int) -> "Derivation":
        return Derivation(self.coeffs.truncate(degree))

    def homogeneous(self, k: int) -> "Derivation":
        """The slice A^(k) = a^(k) d/dz."""
        return Derivation(self.coeffs.homogeneous(k))

    def change_ring(self, ring) -> "Derivation":
        return Derivation(self.coeffs.change_ring(ring))

    def divergence(self) -> Series:
        """The divergence sum_i d a_i / d z_i."""
        total = Series.zero(self.nvars, self.degree, self.ring)
        for i, a_i in enumerate(self.coeffs):
            total = total + a_i.partial(i)
        return total

    def apply(self, u: Series) -> Series:
        """A u = sum_i a_i du/dz_i."""
        assert isinstance(u, Series), "u must be a Series."
        if u.nvars != self.nvars or u.degree != self.degree:
            raise MismatchError("derivation and series differ in nvars or degree")
        if u.ring is not self.ring:
            raise MismatchError(f"derivation over {self.ring} applied to a series over {u.ring}")
        total = Series.zero(u.nvars, u.degree, u.ring)
        for i, a_i in enumerate(self.coeffs):
            if not a_i:
                continue
            du = u.partial(i)
            if du:
                total = total + a_i * du
        return total

    def apply_map(self, F: MapTuple) -> MapTuple:
        return F.map(self.apply)

    def apply_matrix(self, U: SeriesMatrix) -> SeriesMatrix:
        """A acting entrywise on a series matrix."""
        return U.map(self.apply)

    def bracket(self, other: "Derivation") -> "Derivation":
        """Operator commutator [A, B] = AB - BA; component i is A(b_i) - B(a_i)."""
        return Derivation(
            MapTuple(self.apply(b) - other.apply(a) for a, b in zip(self.coeffs, other.coeffs))
        )

    def jacobian(self) -> SeriesMatrix:
        """Ja = (d a_i / d z_j)."""
        return SeriesMatrix(
            [[a_i.partial(j) for j in range(self.nvars)] for a_i in self.coeffs]
        )

    def linear_part(self) -> np.ndarray:
        """Matrix M of the degree-1 part a = Mz + ..., as an object array."""
        n = self.nvars
        matrix = np.empty((n, n), dtype=object)
        for i, a_i in enumerate(self.coeffs):
            for j in range(n):
                exps = tuple(1 if k == j else 0 for k in range(n))
                matrix[i, j] = a_i.coefficient(exps)
        return matrix

    def exactness(self):
        """'graded' (order >= 2), 'nilpotent' (nilpotent linear part) or None."""
        if self.min_order >= 2:
            return "graded"
        if is_nilpotent(self.linear_part()):
            return "nilpotent"
        return None

    def require_exact(self) -> str:
        kind = self.exactness()
        if kind is None:
            raise ExactnessError(
                "linear part of the derivation is not nilpotent; use the numeric exponential"
            )
        return kind

    def step_bound(self, width: int = 1) -> int:
        """Upper bound on the number of nonvanishing exponential terms."""
        if self.min_order >= 2:
            return self.degree + 1
        # nilpotent linear part: L is nilpotent on the jet space of this dimension
        return width * math.comb(self.nvars + self.degree, self.nvars) + 1

    def to_text(self, names=None) -> str:
        return self.coeffs.to_text(names)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Derivation{self.to_text()}"

    def to_json(self) -> dict:
        return self.coeffs.to_json()

    @classmethod
    def from_json(cls, obj: dict) -> "Derivation":
        return cls(MapTuple.from_json(obj))


def _power_terms(step, start, bound: int) -> list:
    """Return [L^k u / k! for k = 0, 1, ...] up to the first vanishing term."""
    terms = [start]
    term = start
    k = 0
    while True:
        k += 1
        term = step(term) / k
        if term.is_zero():
            break
        assert k <= bound, f"exponential did not terminate within {bound} terms"
        terms.append(term)
    logger.debug(f"exponential terminated after {len(terms)} terms")
    return terms


def _combine(terms: list, t):
    """Sum t^k * term_k; a TPoly t produces coefficients in QQ[t]."""
    if isinstance(t, TPoly):
        total = terms[0].change_ring(QQ_T)
        power = TPoly((1,))
        for term in terms[1:]:
            power = power * t
            total = total + term.change_ring(QQ_T).scale(power)
        return total
    t = Fraction(t)
    total = terms[0]
    power = Fraction(1)
    for term in terms[1:]:
        power *= t
        if not power:
            break
        total = total + term.scale(power)
    return total


def _check_exact_inputs(A: Derivation, t) -> None:
    assert isinstance(A, Derivation), "A must be a Derivation."
    if A.ring is not QQ:
        raise RingError(f"the exact exponential needs QQ coefficients, got {A.ring}")
    if isinstance(t, float):
        raise RingError("the exact exponential takes rational or symbolic t; use exp_numeric for floats")
    A.require_exact()


def exp_apply(A: Derivation, u: Series, t=1) -> Series:
    """
    exp(tA) u, exact modulo degree D.

    Args:
        A (Derivation): Generator over QQ satisfying the exactness condition.
        u (Series): Series over QQ with the same nvars and degree.
        t: Rational value, or the symbol seriescore.T for a result over QQ[t].

    Returns:
        Series: The truncated exponential.
    """
    _check_exact_inputs(A, t)
    assert isinstance(u, Series), "u must be a Series."
    terms = _power_terms(A.apply, u, A.step_bound())
    return _combine(terms, t)


def exp_apply_map(A: Derivation, F: MapTuple, t=1) -> MapTuple:
    return MapTuple(exp_apply(A, c, t) for c in F)


def exp_flow(A: Derivation, t=1) -> MapTuple:
    """The flow map exp(tA) z."""
    return exp_apply_map(A, MapTuple.identity(A.nvars, A.degree, A.ring), t)


def exp_apply_augmented_scalar(A: Derivation, g: Series, u: Series, t=1) -> Series:
    """
    exp(t(A + g)) u where g acts by multiplication.

    Args:
        A (Derivation): Generator satisfying the exactness condition.
        g (Series): Multiplier of order >= 1 (the divergence in the Jacobian formula).
        u (Series): Operand.
        t: Rational value or the symbol T.

    Returns:
        Series: The truncated exponential.
    """
    _check_exact_inputs(A, t)
    assert isinstance(g, Series), "g must be a Series."
    if g.order() < 1:
        raise ExactnessError("the multiplier must have no constant term")

    def step(s: Series) -> Series:
        return A.apply(s) + g * s

    return _combine(_power_terms(step, u, A.step_bound()), t)


def exp_apply_augmented_matrix(A: Derivation, Ja: SeriesMatrix, U: SeriesMatrix, t=1) -> SeriesMatrix:
    """
    exp(t(A + R_Ja)) U, with A entrywise and R_Ja right multiplication by Ja.

    Args:
        A (Derivation): Generator satisfying the exactness condition.
        Ja (SeriesMatrix): Jacobian matrix of a (the caller supplies it).
        U (SeriesMatrix): Operand of the same dimension.
        t: Rational value or the symbol T.

    Returns:
        SeriesMatrix: The truncated exponential.
    """
    _check_exact_inputs(A, t)
    assert isinstance(Ja, SeriesMatrix), "Ja must be a SeriesMatrix."
    assert isinstance(U, SeriesMatrix), "U must be a SeriesMatrix."
    if Ja.n != U.n or U.n != A.nvars:
        raise MismatchError("matrix dimensions do not match the derivation")

    def step(V: SeriesMatrix) -> SeriesMatrix:
        return A.apply_matrix(V) + V @ Ja

    return _combine(_power_terms(step, U, A.step_bound(width=U.n * U.n)), t)


def matrix_mul(P: SeriesMatrix, Q: SeriesMatrix) -> SeriesMatrix:
    return P @ Q


def matrix_det(P: SeriesMatrix) -> Series:
    return P.det()


def _max_norm(s: Series) -> float:
    return max((abs(c) for _, c in s.items()), default=0.0)


def exp_numeric(A: Derivation, u: Series, t: float = 1.0, eps: float = NUMERIC_EPS, kmax: int = NUMERIC_KMAX) -> Series:
    """
    Partial sums of exp(tA) u over floats until a term's max-norm drops to eps.

    Args:
        A (Derivation): Any derivation without constant part.
        u (Series): Operand (promoted to floats).
        t (float): Time parameter.
        eps (float): Stopping tolerance on the max-norm of the added term.
        kmax (int): Maximum number of terms.

    Returns:
        Series: Float series with the partial sum.

    Raises:
        ConvergenceError: kmax was reached with the last term still above eps.
    """
    assert isinstance(A, Derivation), "A must be a Derivation."
    assert isinstance(u, Series), "u must be a Series."
    assert isinstance(kmax, int) and kmax >= 1, "kmax must be a positive integer."

    field = A.change_ring(RR) if A.ring is not RR else A
    term = u.change_ring(RR) if u.ring is not RR else u
    t = float(t)
    total = term
    norm = _max_norm(term)
    for k in range(1, kmax + 1):
        term = field.apply(term) * t / k
        total = total + term
        norm = _max_norm(term)
        if norm <= eps:
            logger.debug(f"numeric exponential converged after {k} terms (norm {norm:.3e})")
            return total
    raise ConvergenceError(
        f"numeric exponential did not converge in {kmax} terms (last norm {norm:.3e})",
        partial=total,
        norm=norm,
        steps=kmax,
    )


def check_automorphism(A: Derivation, u: Series, v: Series, t=1) -> bool:
    """exp(tA)(uv) == exp(tA)u * exp(tA)v modulo degree D."""
    left = exp_apply(A, u * v, t)
    right = exp_apply(A, u, t) * exp_apply(A, v, t)
    return left == right
