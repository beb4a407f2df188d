"""
Module for exact arithmetic on truncated multivariate formal power series.

A Series is a sparse map from exponent tuples to coefficients, exact modulo
terms of total degree greater than its truncation degree D. Coefficients live
in a pluggable ring: exact rationals (QQ), polynomials in t over the rationals
(QQ_T) or floats (RR, numeric mode only).
"""
import logging
import math
from fractions import Fraction
from numbers import Rational

logger = logging.getLogger(__name__)

# Exponent: a tuple of n non-negative integers; its total degree is sum(exps).
Exponent = tuple


class JetflowError(Exception):
    """Base class for all domain errors raised by jetflow."""


class MismatchError(JetflowError):
    """Operands disagree in number of variables, degree, ring or dimension."""


class PrecisionError(JetflowError):
    """A truncation was asked to invent precision."""


class CompositionError(JetflowError):
    """Composition with a map that has a constant term."""


class RingError(JetflowError):
    """The operation needs a different coefficient ring."""


class NotTangentToIdentityError(JetflowError):
    """The map is not of the form z + (terms of order >= 2)."""


def _grlex_key(exps: Exponent) -> tuple:
    return (sum(exps), tuple(-e for e in exps))


class TPoly:
    """
    Dense univariate polynomial in t with exact rational coefficients.

    Attributes:
        coeffs (tuple): Fractions c0, c1, ... with no trailing zeros.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()) -> None:
        values = [Fraction(c) for c in coeffs]
        while values and not values[-1]:
            values.pop()
        self.coeffs = tuple(values)

    @classmethod
    def generator(cls) -> "TPoly":
        """Return the polynomial t."""
        return cls((0, 1))

    @classmethod
    def _lift(cls, value) -> "TPoly":
        if isinstance(value, TPoly):
            return value
        if isinstance(value, (int, Rational)):
            return cls((value,))
        raise RingError(f"cannot use {type(value).__name__} as a polynomial in t")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, TPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == TPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "TPoly":
        try:
            other = TPoly._lift(other)
        except RingError:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        left = self.coeffs + (0,) * (size - len(self.coeffs))
        right = other.coeffs + (0,) * (size - len(other.coeffs))
        return TPoly(a + b for a, b in zip(left, right))

    __radd__ = __add__

    def __neg__(self) -> "TPoly":
        return TPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "TPoly":
        return self + (-TPoly._lift(other))

    def __rsub__(self, other) -> "TPoly":
        return TPoly._lift(other) + (-self)

    def __mul__(self, other) -> "TPoly":
        if isinstance(other, (int, Rational)):
            return TPoly(c * other for c in self.coeffs)
        if not isinstance(other, TPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return TPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return TPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TPoly":
        if not isinstance(other, (int, Rational)):
            return NotImplemented
        return TPoly(c / other for c in self.coeffs)

    def __pow__(self, k: int) -> "TPoly":
        assert isinstance(k, int) and k >= 0, "exponent must be a non-negative integer."
        result = TPoly((1,))
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, t0) -> Fraction:
        """Substitute t = t0 (Horner)."""
        value = Fraction(0)
        for c in reversed(self.coeffs):
            value = value * t0 + c
        return value

    def derivative(self) -> "TPoly":
        return TPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            power = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            magnitude = abs(c)
            if not power:
                body = str(magnitude)
            elif magnitude == 1:
                body = power
            else:
                body = f"{magnitude}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"TPoly({str(self)})"


class CoefficientRing:
    """Interface of a coefficient ring used by Series."""

    name = "abstract"

    def coerce(self, value):
        raise NotImplementedError

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def format(self, c) -> str:
        return str(c)

    def is_negative(self, c) -> bool:
        return False

    def to_json(self, c):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


class RationalField(CoefficientRing):
    """Exact rationals, always in lowest terms with positive denominator."""

    name = "QQ"

    def coerce(self, value) -> Fraction:
        if isinstance(value, (int, Rational)):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise RingError(f"{type(value).__name__} is not an exact rational")

    def is_negative(self, c) -> bool:
        return c < 0

    def to_json(self, c) -> str:
        return str(c)

    def from_json(self, obj) -> Fraction:
        return Fraction(obj)


class TPolynomialRing(CoefficientRing):
    """Polynomials in the deformation parameter t over the exact rationals."""

    name = "QQ[t]"

    def coerce(self, value) -> TPoly:
        if isinstance(value, TPoly):
            return value
        if isinstance(value, (int, Rational, str)):
            return TPoly((Fraction(value),))
        raise RingError(f"{type(value).__name__} cannot be lifted to QQ[t]")

    def format(self, c) -> str:
        if len(c.coeffs) == 1:
            return str(c.coeffs[0])
        return f"({c})"

    def is_negative(self, c) -> bool:
        return len(c.coeffs) == 1 and c.coeffs[0] < 0

    def to_json(self, c) -> list:
        return [str(x) for x in c.coeffs]

    def from_json(self, obj) -> TPoly:
        return TPoly(Fraction(x) for x in obj)


class FloatField(CoefficientRing):
    """Double-precision floats, for the numeric exponential only."""

    name = "RR"

    def coerce(self, value) -> float:
        if isinstance(value, TPoly):
            raise RingError("cannot convert a polynomial in t to a float")
        return float(value)

    def format(self, c) -> str:
        return repr(c)

    def is_negative(self, c) -> bool:
        return c < 0

    def to_json(self, c) -> float:
        return c

    def from_json(self, obj) -> float:
        return float(obj)


QQ = RationalField()
QQ_T = TPolynomialRing()
RR = FloatField()
T = TPoly.generator()


def ring_for_json(coeff) -> CoefficientRing:
    if isinstance(coeff, list):
        return QQ_T
    if isinstance(coeff, float):
        return RR
    return QQ


class Series:
    """
    Truncated multivariate formal power series.

    Attributes:
        nvars (int): Number of variables n.
        degree (int): Truncation degree D; terms of total degree > D are discarded.
        ring (CoefficientRing): Coefficient ring.
        terms (dict): Exponent tuple -> nonzero coefficient.
    """

    __slots__ = ("nvars", "degree", "ring", "_terms", "_graded")

    def __init__(self, nvars: int, degree: int, terms: dict = None, ring: CoefficientRing = QQ) -> None:
        """
        Build a series, dropping zero coefficients and terms above the degree.

        Args:
            nvars (int): Number of variables.
            degree (int): Truncation degree.
            terms (dict): Mapping of exponent tuples to coefficients.
            ring (CoefficientRing): Ring the coefficients are coerced into.
        """
        assert isinstance(nvars, int) and nvars >= 1, "nvars must be a positive integer."
        assert isinstance(degree, int) and degree >= 0, "degree must be a non-negative integer."
        assert isinstance(ring, CoefficientRing), "ring must be a CoefficientRing."

        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            assert len(exps) == nvars, "exponent length must equal nvars."
            assert all(e >= 0 for e in exps), "exponents must be non-negative."
            if sum(exps) > degree:
                continue
            coeff = ring.coerce(coeff)
            if coeff:
                clean[exps] = clean.get(exps, ring.zero()) + coeff
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self.degree = degree
        self.ring = ring
        self._terms = clean
        self._graded = None

    @classmethod
    def _make(cls, nvars: int, degree: int, ring: CoefficientRing, terms: dict) -> "Series":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.degree = degree
        obj.ring = ring
        obj._terms = terms
        obj._graded = None
        return obj

    @classmethod
    def zero(cls, nvars: int, degree: int, ring: CoefficientRing = QQ) -> "Series":
        return cls._make(nvars, degree, ring, {})

    @classmethod
    def constant(cls, value, nvars: int, degree: int, ring: CoefficientRing = QQ) -> "Series":
        return cls(nvars, degree, {(0,) * nvars: value}, ring)

    @classmethod
    def variable(cls, index: int, nvars: int, degree: int, ring: CoefficientRing = QQ) -> "Series":
        """Return z_{index+1} (indices are 0-based)."""
        assert 0 <= index < nvars, "variable index out of range."
        exps = tuple(1 if k == index else 0 for k in range(nvars))
        return cls(nvars, degree, {exps: 1}, ring)

    @classmethod
    def monomial(cls, exps, coeff, degree: int, ring: CoefficientRing = QQ) -> "Series":
        exps = tuple(exps)
        return cls(len(exps), degree, {exps: coeff}, ring)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), self.ring.zero())

    def graded_items(self) -> list:
        """Terms as (exps, total, coeff), sorted by total degree."""
        if self._graded is None:
            self._graded = sorted(
                ((e, sum(e), c) for e, c in self._terms.items()), key=lambda item: item[1]
            )
        return self._graded

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def _check(self, other: "Series") -> None:
        if not isinstance(other, Series):
            raise MismatchError(f"expected a Series, got {type(other).__name__}")
        if self.nvars != other.nvars or self.degree != other.degree:
            raise MismatchError(
                f"series shapes differ: (n={self.nvars}, D={self.degree}) vs (n={other.nvars}, D={other.degree})"
            )
        if self.ring is not other.ring:
            raise MismatchError(f"coefficient rings differ: {self.ring} vs {other.ring}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.degree == other.degree
            and self.ring is other.ring
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.degree, self.ring.name, frozenset(self._terms.items())))

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            value = out.get(exps)
            value = coeff if value is None else value + coeff
            if value:
                out[exps] = value
            else:
                out.pop(exps, None)
        return Series._make(self.nvars, self.degree, self.ring, out)

    def __neg__(self) -> "Series":
        return Series._make(self.nvars, self.degree, self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, factor) -> "Series":
        """Multiply every coefficient by a ring element."""
        factor = self.ring.coerce(factor)
        if not factor:
            return Series.zero(self.nvars, self.degree, self.ring)
        out = {}
        for exps, coeff in self._terms.items():
            value = coeff * factor
            if value:
                out[exps] = value
        return Series._make(self.nvars, self.degree, self.ring, out)

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        limit = self.degree
        right = other.graded_items()
        out = {}
        for e1, d1, c1 in self.graded_items():
            room = limit - d1
            if room < 0:
                break
            for e2, d2, c2 in right:
                if d2 > room:
                    break
                exps = tuple(a + b for a, b in zip(e1, e2))
                value = out.get(exps)
                out[exps] = c1 * c2 if value is None else value + c1 * c2
        return Series._make(self.nvars, self.degree, self.ring, {e: c for e, c in out.items() if c})

    def __rmul__(self, other) -> "Series":
        return self.scale(other)

    def __truediv__(self, divisor) -> "Series":
        assert isinstance(divisor, (int, Rational, float)), "divisor must be a scalar."
        out = {}
        for exps, coeff in self._terms.items():
            value = coeff / divisor
            if value:
                out[exps] = value
        return Series._make(self.nvars, self.degree, self.ring, out)

    def __pow__(self, k: int) -> "Series":
        assert isinstance(k, int) and k >= 0, "exponent must be a non-negative integer."
        result = Series.constant(1, self.nvars, self.degree, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def partial(self, index: int) -> "Series":
        """
        Formal partial derivative with respect to z_{index+1}; keeps the degree D.

        Args:
            index (int): 0-based variable index.

        Returns:
            Series: The derivative, exact modulo total degree > D - 1.
        """
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable index {index} out of range for {self.nvars} variables")
        out = {}
        for exps, coeff in self._terms.items():
            power = exps[index]
            if power == 0:
                continue
            lowered = exps[:index] + (power - 1,) + exps[index + 1:]
            out[lowered] = coeff * power
        return Series._make(self.nvars, self.degree, self.ring, out)

    def order(self):
        """Smallest total degree with a nonzero coefficient; math.inf for zero."""
        if not self._terms:
            return math.inf
        return min(sum(e) for e in self._terms)

    def max_total(self) -> int:
        """Largest total degree present; -1 for the zero series."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def truncate(self, degree: int) -> "Series":
        """
        Drop terms of total degree above the given degree.

        Args:
            degree (int): New truncation degree, at most the current one.

        Returns:
            Series: The coarsened series with truncation degree `degree`.
        """
        assert isinstance(degree, int) and degree >= 0, "degree must be a non-negative integer."
        if degree > self.degree:
            raise PrecisionError(f"cannot raise truncation degree from {self.degree} to {degree}")
        out = {e: c for e, c in self._terms.items() if sum(e) <= degree}
        return Series._make(self.nvars, degree, self.ring, out)

    def homogeneous(self, k: int) -> "Series":
        """Degree-k slice, at the same truncation degree."""
        out = {e: c for e, c in self._terms.items() if sum(e) == k}
        return Series._make(self.nvars, self.degree, self.ring, out)

    def below(self, k: int) -> "Series":
        """Terms of total degree < k, at the same truncation degree."""
        out = {e: c for e, c in self._terms.items() if sum(e) < k}
        return Series._make(self.nvars, self.degree, self.ring, out)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def reflect(self) -> "Series":
        """Substitute z -> -z: flip the sign of odd total-degree terms."""
        out = {e: (-c if sum(e) % 2 else c) for e, c in self._terms.items()}
        return Series._make(self.nvars, self.degree, self.ring, out)

    def map_coefficients(self, fn, ring: CoefficientRing) -> "Series":
        out = {}
        for exps, coeff in self._terms.items():
            value = ring.coerce(fn(coeff))
            if value:
                out[exps] = value
        return Series._make(self.nvars, self.degree, ring, out)

    def change_ring(self, ring: CoefficientRing) -> "Series":
        """Promote the coefficients into another ring (QQ -> QQ[t] or QQ -> RR)."""
        if ring is self.ring:
            return self
        if self.ring is not QQ:
            raise RingError(f"cannot convert {self.ring} coefficients to {ring}")
        return self.map_coefficients(lambda c: c, ring)

    def compose(self, inner: "MapTuple") -> "Series":
        """
        Substitute the components of `inner` for the variables: u(F_1, ..., F_n).

        Args:
            inner (MapTuple): Map without constant terms, one component per variable of self.

        Returns:
            Series: The composition, truncated at the common degree D.
        """
        assert isinstance(inner, MapTuple), "inner must be a MapTuple."
        if len(inner) != self.nvars:
            raise MismatchError(f"cannot substitute {len(inner)} components into {self.nvars} variables")
        if inner.degree != self.degree:
            raise MismatchError(f"truncation degrees differ: {self.degree} vs {inner.degree}")
        for k, component in enumerate(inner):
            if component.order() < 1:
                raise CompositionError(f"component {k + 1} of the inner map has a constant term")
        outer = self
        if inner.ring is not self.ring:
            if self.ring is QQ:
                outer = self.change_ring(inner.ring)
            else:
                inner = inner.change_ring(self.ring)

        nvars = inner.nvars
        ring = inner.ring
        one = Series.constant(1, nvars, self.degree, ring)
        cache = {(0,) * self.nvars: one}

        def monomial(exps):
            found = cache.get(exps)
            if found is not None:
                return found
            index = next(k for k, e in enumerate(exps) if e)
            lowered = exps[:index] + (exps[index] - 1,) + exps[index + 1:]
            value = monomial(lowered) * inner[index]
            cache[exps] = value
            return value

        out = {}
        for exps, _, coeff in outer.graded_items():
            for e2, c2 in monomial(exps).items():
                value = out.get(e2)
                out[e2] = coeff * c2 if value is None else value + coeff * c2
        return Series._make(nvars, self.degree, ring, {e: c for e, c in out.items() if c})

    def to_text(self, names=None) -> str:
        """Canonical text form, graded-lex order, e.g. '1 - 3/2*z1*z2^2'."""
        if names is None:
            names = [f"z{k + 1}" for k in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for exps in sorted(self._terms, key=_grlex_key):
            coeff = self._terms[exps]
            negative = self.ring.is_negative(coeff)
            magnitude = -coeff if negative else coeff
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
            )
            text = self.ring.format(magnitude)
            if mono:
                body = mono if magnitude == 1 else f"{text}*{mono}"
            else:
                body = text
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Series(n={self.nvars}, D={self.degree}, {self.ring}: {self.to_text()})"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "degree": self.degree,
            "terms": [
                {"exps": list(exps), "coeff": self.ring.to_json(self._terms[exps])}
                for exps in sorted(self._terms, key=_grlex_key)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, ring: CoefficientRing = None) -> "Series":
        assert isinstance(obj, dict), "obj must be a dictionary."
        terms = obj.get("terms", [])
        if ring is None:
            ring = ring_for_json(terms[0]["coeff"]) if terms else QQ
        return cls(
            int(obj["nvars"]),
            int(obj["degree"]),
            {tuple(t["exps"]): ring.from_json(t["coeff"]) for t in terms},
            ring,
        )


class MapTuple:
    """
    An n-tuple of series with common nvars = n, degree and ring.

    Attributes:
        components (tuple): The Series F_1, ..., F_n.
    """

    __slots__ = ("components",)

    def __init__(self, components) -> None:
        components = tuple(components)
        assert components, "a map needs at least one component."
        assert all(isinstance(c, Series) for c in components), "components must be Series."
        first = components[0]
        for c in components:
            if c.nvars != first.nvars or c.degree != first.degree or c.ring is not first.ring:
                raise MismatchError("map components must share nvars, degree and ring")
        if len(components) != first.nvars:
            raise MismatchError(f"a map on {first.nvars} variables needs {first.nvars} components, got {len(components)}")
        self.components = components

    @classmethod
    def identity(cls, nvars: int, degree: int, ring: CoefficientRing = QQ) -> "MapTuple":
        return cls(Series.variable(k, nvars, degree, ring) for k in range(nvars))

    @classmethod
    def zero(cls, nvars: int, degree: int, ring: CoefficientRing = QQ) -> "MapTuple":
        return cls(Series.zero(nvars, degree, ring) for _ in range(nvars))

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def degree(self) -> int:
        return self.components[0].degree

    @property
    def ring(self) -> CoefficientRing:
        return self.components[0].ring

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, index: int) -> Series:
        return self.components[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MapTuple):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __add__(self, other: "MapTuple") -> "MapTuple":
        return MapTuple(a + b for a, b in zip(self, other))

    def __sub__(self, other: "MapTuple") -> "MapTuple":
        return MapTuple(a - b for a, b in zip(self, other))

    def __neg__(self) -> "MapTuple":
        return MapTuple(-c for c in self)

    def scale(self, factor) -> "MapTuple":
        return MapTuple(c.scale(factor) for c in self)

    def map(self, fn) -> "MapTuple":
        return MapTuple(fn(c) for c in self)

    def truncate(self, degree: int) -> "MapTuple":
        return MapTuple(c.truncate(degree) for c in self)

    def homogeneous(self, k: int) -> "MapTuple":
        return MapTuple(c.homogeneous(k) for c in self)

    def reflect(self) -> "MapTuple":
        return MapTuple(c.reflect() for c in self)

    def change_ring(self, ring: CoefficientRing) -> "MapTuple":
        return MapTuple(c.change_ring(ring) for c in self)

    def order(self):
        return min(c.order() for c in self)

    def is_tangent_to_identity(self) -> bool:
        """True when F_i = z_i + (terms of order >= 2) for every i (F in F_1)."""
        identity = MapTuple.identity(self.nvars, self.degree, self.ring)
        return all((f - z).order() >= 2 for f, z in zip(self, identity))

    def require_tangent_to_identity(self) -> None:
        if not self.is_tangent_to_identity():
            raise NotTangentToIdentityError("map is not of the form z + (terms of order >= 2)")

    def compose(self, inner: "MapTuple") -> "MapTuple":
        """Return self o inner, i.e. substitute `inner` into every component."""
        return MapTuple(c.compose(inner) for c in self)

    def iterate(self, k: int) -> "MapTuple":
        """k-fold self-composition F^[k]; F^[0] is the identity."""
        assert isinstance(k, int) and k >= 0, "k must be a non-negative integer."
        result = MapTuple.identity(self.nvars, self.degree, self.ring)
        for _ in range(k):
            result = self.compose(result)
        return result

    def to_text(self, names=None) -> str:
        return "(" + ", ".join(c.to_text(names) for c in self) + ")"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"MapTuple{self.to_text()}"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "degree": self.degree,
            "components": [c.to_json() for c in self],
        }

    @classmethod
    def from_json(cls, obj: dict, ring: CoefficientRing = None) -> "MapTuple":
        assert isinstance(obj, dict), "obj must be a dictionary."
        return cls(Series.from_json(c, ring) for c in obj["components"])


def agree(left, right, degree: int) -> bool:
    """Compare two series, maps or matrices after truncating both to `degree`."""
    return left.truncate(degree) == right.truncate(degree)
