"""Exact arithmetic: rationals, Gaussian rationals and real quadratic fields."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy

Rational = Fraction
"""Type alias for exact rationals. Fractions are kept in lowest terms with a
positive denominator after every operation."""

RationalLike = Fraction | int

_RATIONAL_PATTERN = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^(?P<x>{_RATIONAL_PATTERN})"
    rf"(?:(?P<op>[+-])(?P<y>{_RATIONAL_PATTERN})\*sqrt\((?P<D>\d+)\))?$"
)


def parse_rational(text: str) -> Fraction:
    """
    Parse a rational number written as ``p/q`` or ``p``.

    Whitespace is ignored anywhere in the string.

    Args:
        text: The string to parse

    Returns:
        The parsed value in lowest terms

    Raises:
        ValueError: If the string is not in the ``p/q`` grammar or q is zero
    """
    if not isinstance(text, str):
        raise ValueError(f"expected a p/q string, got {type(text).__name__} {text!r}")
    compact = "".join(text.split())
    if not re.fullmatch(_RATIONAL_PATTERN, compact):
        raise ValueError(f"'{text}' is not a rational of the form p/q or p")
    try:
        return Fraction(compact)
    except ZeroDivisionError as e:
        raise ValueError(f"'{text}' has a zero denominator") from e


def format_rational(value: RationalLike) -> str:
    """Format a rational in the ``p/q`` grammar understood by :func:`parse_rational`."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_is_perfect_square(q: RationalLike) -> Fraction | None:
    """
    Return the rational square root of q when it exists.

    Args:
        q: A non-negative rational

    Returns:
        √q if it is rational, None otherwise

    Raises:
        ValueError: If q is negative
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"Cannot take the square root of negative value {q}")
    num_root = math.isqrt(q.numerator)
    den_root = math.isqrt(q.denominator)
    if num_root * num_root != q.numerator or den_root * den_root != q.denominator:
        return None
    return Fraction(num_root, den_root)


@lru_cache(maxsize=256)
def squarefree_decomposition(n: int) -> tuple[int, int]:
    """
    Split a positive integer as ``n = s**2 * core`` with ``core`` squarefree.

    Returns:
        The pair (s, core)
    """
    if n <= 0:
        raise ValueError(f"Expected a positive integer, got {n}")
    s, core = 1, 1
    for prime, power in sympy.factorint(n).items():
        s *= prime ** (power // 2)
        if power % 2:
            core *= prime
    return s, core


@dataclass(frozen=True)
class GaussianRational:
    """A complex number re + im·i with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value: GaussianRational | RationalLike) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        return cls(Fraction(value))

    def __add__(self, other: GaussianRational | RationalLike) -> GaussianRational:
        other = self.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: GaussianRational | RationalLike) -> GaussianRational:
        return self + (-self.coerce(other))

    def __rsub__(self, other: GaussianRational | RationalLike) -> GaussianRational:
        return self.coerce(other) - self

    def __mul__(self, other: GaussianRational | RationalLike) -> GaussianRational:
        other = self.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: GaussianRational | RationalLike) -> GaussianRational:
        other = self.coerce(other)
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("Division by the zero Gaussian rational")
        numerator = self * other.conjugate()
        return GaussianRational(numerator.re / norm, numerator.im / norm)

    def __rtruediv__(self, other: GaussianRational | RationalLike) -> GaussianRational:
        return self.coerce(other) / self

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus re² + im²."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_sympy(self) -> sympy.Expr:
        return sympy.Rational(self.re.numerator, self.re.denominator) + sympy.I * sympy.Rational(
            self.im.numerator, self.im.denominator
        )

    def __str__(self) -> str:
        if self.im == 0:
            return format_rational(self.re)
        imag = format_rational(abs(self.im))
        if self.re == 0:
            return f"{'-' if self.im < 0 else ''}{imag}i"
        return f"{format_rational(self.re)} {'-' if self.im < 0 else '+'} {imag}i"


@dataclass(frozen=True)
class QuadExt:
    """
    An element x + y·√D of the real quadratic field ℚ(√D).

    D is normalized to be squarefree at construction (square factors move into
    y). Rational elements are stored with y = 0 and D = 1, so they combine with
    elements of any field. Combining two irrational elements with different D
    is a contract violation.
    """

    x: Fraction
    y: Fraction = Fraction(0)
    D: int = 1

    def __post_init__(self) -> None:
        x, y, D = Fraction(self.x), Fraction(self.y), self.D
        if not isinstance(D, int) or D <= 0:
            raise ValueError(f"D must be a positive integer, got {D!r}")
        s, core = squarefree_decomposition(D)
        y *= s
        if core == 1:
            x, y = x + y, Fraction(0)
        if y == 0:
            core = 1
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "D", core)

    @classmethod
    def coerce(cls, value: QuadExt | RationalLike) -> QuadExt:
        if isinstance(value, QuadExt):
            return value
        return cls(Fraction(value))

    def _common_d(self, other: QuadExt) -> int:
        if self.D == 1:
            return other.D
        if other.D in (1, self.D):
            return self.D
        raise ValueError(f"Cannot mix elements of Q(sqrt({self.D})) and Q(sqrt({other.D}))")

    def __add__(self, other: QuadExt | RationalLike) -> QuadExt:
        other = self.coerce(other)
        return QuadExt(self.x + other.x, self.y + other.y, self._common_d(other))

    __radd__ = __add__

    def __neg__(self) -> QuadExt:
        return QuadExt(-self.x, -self.y, self.D)

    def __sub__(self, other: QuadExt | RationalLike) -> QuadExt:
        return self + (-self.coerce(other))

    def __rsub__(self, other: QuadExt | RationalLike) -> QuadExt:
        return self.coerce(other) - self

    def __mul__(self, other: QuadExt | RationalLike) -> QuadExt:
        other = self.coerce(other)
        D = self._common_d(other)
        return QuadExt(
            self.x * other.x + self.y * other.y * D,
            self.x * other.y + self.y * other.x,
            D,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: QuadExt | RationalLike) -> QuadExt:
        other = self.coerce(other)
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("Division by zero in a quadratic field")
        numerator = self * other.conjugate()
        return QuadExt(numerator.x / norm, numerator.y / norm, numerator.D)

    def __rtruediv__(self, other: QuadExt | RationalLike) -> QuadExt:
        return self.coerce(other) / self

    def __pow__(self, exponent: int) -> QuadExt:
        if exponent < 0:
            return QuadExt(1) / self**-exponent
        result = QuadExt(1)
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> QuadExt:
        """The Galois conjugate x − y√D."""
        return QuadExt(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        """The field norm x² − D·y², never zero for a nonzero element."""
        return self.x * self.x - self.D * self.y * self.y

    def sign(self) -> int:
        return quad_sign(self)

    def is_rational(self) -> bool:
        return self.y == 0

    def is_integer(self) -> bool:
        return self.y == 0 and self.x.denominator == 1

    def __lt__(self, other: QuadExt | RationalLike) -> bool:
        return quad_sign(self - other) < 0

    def __le__(self, other: QuadExt | RationalLike) -> bool:
        return quad_sign(self - other) <= 0

    def __gt__(self, other: QuadExt | RationalLike) -> bool:
        return quad_sign(self - other) > 0

    def __ge__(self, other: QuadExt | RationalLike) -> bool:
        return quad_sign(self - other) >= 0

    def evaluate(self, dps: int = 50) -> mpmath.mpf:
        """Evaluate to an mpmath float carrying ``dps`` decimal digits."""
        with mpmath.workdps(dps):
            return mpmath.mpf(self.x.numerator) / self.x.denominator + (
                mpmath.mpf(self.y.numerator) / self.y.denominator
            ) * mpmath.sqrt(self.D)

    def __float__(self) -> float:
        return float(self.evaluate(30))

    def to_sympy(self) -> sympy.Expr:
        return sympy.Rational(self.x.numerator, self.x.denominator) + sympy.Rational(
            self.y.numerator, self.y.denominator
        ) * sympy.sqrt(self.D)

    def __str__(self) -> str:
        return format_quad(self)


def quad_sign(v: QuadExt) -> int:
    """
    Decide the sign of x + y√D exactly.

    Opposite-sign components are resolved by comparing x² against y²·D.

    Returns:
        -1, 0 or +1
    """
    sx = (v.x > 0) - (v.x < 0)
    sy = (v.y > 0) - (v.y < 0)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    diff = v.x * v.x - v.y * v.y * v.D
    if diff > 0:
        return sx
    if diff < 0:
        return sy
    return 0


def quad_is_negative_integer(v: QuadExt) -> bool:
    """True iff v is a rational integer strictly below zero."""
    return v.is_integer() and v.x < 0


def parse_quad(text: str) -> QuadExt:
    """
    Parse ``p1/q1 + p2/q2*sqrt(D)`` (or a bare rational), ignoring whitespace.

    Raises:
        ValueError: If the string does not follow the grammar
    """
    if not isinstance(text, str):
        raise ValueError(f"expected a quadratic string, got {type(text).__name__} {text!r}")
    compact = "".join(text.split())
    match = _QUAD_RE.fullmatch(compact)
    if match is None:
        raise ValueError(f"'{text}' is not of the form p1/q1 + p2/q2*sqrt(D)")
    x = parse_rational(match["x"])
    if match["y"] is None:
        return QuadExt(x)
    y = parse_rational(match["y"])
    if match["op"] == "-":
        y = -y
    D = int(match["D"])
    if D == 0:
        raise ValueError(f"'{text}' uses sqrt(0)")
    return QuadExt(x, y, D)


def format_quad(v: QuadExt) -> str:
    """Format in the grammar accepted by :func:`parse_quad`."""
    if v.y == 0:
        return format_rational(v.x)
    op = "-" if v.y < 0 else "+"
    return f"{format_rational(v.x)} {op} {format_rational(abs(v.y))}*sqrt({v.D})"
