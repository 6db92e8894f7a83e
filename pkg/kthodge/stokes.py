"""
Exact solver for the Weil-Brezin (n ≠ 0) Fourier sectors.

Each sector reduces to a first-order system y′ = (Ax + B)y on the real line.
With A diagonalized to eigenvalues λ₁ > 0 > λ₂ and PBP⁻¹ = [[b₁, b₂], [b₃, b₄]],
a Schwartz solution exists iff b₂b₃ ∈ (λ₁ − λ₂)·ℤ⁻. Everything is routed
through the single scalar t = 8πd²√ρ: for k = 0 the criterion becomes
t² + 8|n|ut − n² = 0 for a negative integer u.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

import mpmath
import numpy as np
import sympy

from .numbers import (
    QuadExt,
    RationalLike,
    format_quad,
    format_rational,
    quad_is_negative_integer,
    quad_sign,
)

RhoSqrt = Fraction | int | sympy.Expr
"""Type alias for √ρ: exact rational, or an exact sympy expression when ρ is transcendental."""


class TMode(str, Enum):
    PI_RATIONAL = "pi_rational"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class TParam:
    """
    The solvability scalar t = 8πd²√ρ.

    In pi_rational mode t = value·π with value rational, so t is transcendental.
    In quadratic mode t = value, an exact element of a real quadratic field.
    """

    mode: TMode
    value: Fraction | QuadExt

    def __post_init__(self) -> None:
        if self.mode is TMode.PI_RATIONAL:
            if not isinstance(self.value, Fraction | int):
                raise ValueError(f"pi_rational t needs a rational coefficient, got {self.value!r}")
            object.__setattr__(self, "value", Fraction(self.value))
            positive = self.value > 0
        else:
            if not isinstance(self.value, QuadExt):
                raise ValueError(f"quadratic t needs a QuadExt value, got {self.value!r}")
            positive = quad_sign(self.value) > 0
        if not positive:
            raise ValueError(f"t must be positive, got {self}")

    @classmethod
    def pi_rational(cls, coefficient: RationalLike) -> "TParam":
        return cls(TMode.PI_RATIONAL, Fraction(coefficient))

    @classmethod
    def quadratic(cls, value: QuadExt) -> "TParam":
        return cls(TMode.QUADRATIC, value)

    @classmethod
    def from_rho_sqrt(cls, d: RationalLike, rho_sqrt: RationalLike) -> "TParam":
        """t for rational d and √ρ: 8d²√ρ·π."""
        d = Fraction(d)
        return cls.pi_rational(8 * d * d * Fraction(rho_sqrt))

    def to_sympy(self) -> sympy.Expr:
        if self.mode is TMode.PI_RATIONAL:
            assert isinstance(self.value, Fraction)
            return sympy.Rational(self.value.numerator, self.value.denominator) * sympy.pi
        assert isinstance(self.value, QuadExt)
        return self.value.to_sympy()

    def evaluate(self, dps: int = 50) -> mpmath.mpf:
        with mpmath.workdps(dps):
            if self.mode is TMode.PI_RATIONAL:
                assert isinstance(self.value, Fraction)
                return mpmath.mpf(self.value.numerator) / self.value.denominator * mpmath.pi
            assert isinstance(self.value, QuadExt)
            return self.value.evaluate(dps)

    def __str__(self) -> str:
        if self.mode is TMode.PI_RATIONAL:
            return f"{format_rational(self.value)}*pi"
        assert isinstance(self.value, QuadExt)
        return format_quad(self.value)


@dataclass(frozen=True)
class WBSector:
    """Weil-Brezin sector H_{k,m,n}: n ≠ 0 and 0 ≤ m < |n|."""

    k: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.n == 0:
            raise ValueError("Weil-Brezin sectors need n ≠ 0")
        if not 0 <= self.m < abs(self.n):
            raise ValueError(f"m must lie in [0, {abs(self.n)}), got {self.m}")


@dataclass(frozen=True)
class StokesCertificate:
    """
    A solvable pair (n, u) with t² + 8|n|ut − n² = 0.

    multiplicity is the number of harmonic forms credited to n: one per
    sector m ∈ {0, …, |n| − 1}.
    """

    n: int
    u: int
    multiplicity: int = 1


@dataclass(frozen=True)
class OdeSystem:
    """y′ = (Ax + B)y for one sector, with exact sympy entries in π."""

    sector: WBSector
    A: sympy.ImmutableMatrix
    B: sympy.ImmutableMatrix

    def numeric(self) -> tuple[np.ndarray, np.ndarray]:
        """A and B as complex128 arrays."""
        return (
            np.array(sympy.N(self.A, 30), dtype=complex),
            np.array(sympy.N(self.B, 30), dtype=complex),
        )


@dataclass(frozen=True)
class Diagonalization:
    """Eigenvalues of A and the entries of PBP⁻¹, with λ₁ > 0 > λ₂."""

    lambda1: sympy.Expr
    lambda2: sympy.Expr
    b1: sympy.Expr
    b2: sympy.Expr
    b3: sympy.Expr
    b4: sympy.Expr
    P: sympy.ImmutableMatrix

    @property
    def b2b3(self) -> sympy.Expr:
        return sympy.expand(self.b2 * self.b3)


def _as_sympy(value: RhoSqrt) -> sympy.Expr:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.sympify(value)


def _require_positive(name: str, value: sympy.Expr) -> sympy.Expr:
    if not bool(value > 0):
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def build_ode_system(
    sector: WBSector, a: RationalLike, d: RationalLike, rho_sqrt: RhoSqrt
) -> OdeSystem:
    """
    Build A and B for a sector with b = 8πd.

    A = 2πn·[[0, 1/ρ], [1, 0]] and
    B = 2π·[[k, (m − (a − i)n/b)/ρ], [m − (a + i)n/b, 2di − k]].

    Args:
        sector: The (k, m, n) sector
        a: Structure parameter a
        d: b/8π, positive
        rho_sqrt: √ρ, positive

    Returns:
        The exact system

    Raises:
        ValueError: If d or rho_sqrt is not positive
    """
    d_sym = _require_positive("d", _as_sympy(Fraction(d)))
    r = _require_positive("rho_sqrt", _as_sympy(rho_sqrt))
    a_sym = _as_sympy(Fraction(a))
    rho = r**2
    pi, i = sympy.pi, sympy.I
    b = 8 * pi * d_sym
    k, m, n = sector.k, sector.m, sector.n
    A = 2 * pi * n * sympy.Matrix([[0, 1 / rho], [1, 0]])
    B = 2 * pi * sympy.Matrix(
        [
            [k, (m - (a_sym - i) * n / b) / rho],
            [m - (a_sym + i) * n / b, 2 * d_sym * i - k],
        ]
    )
    return OdeSystem(
        sector,
        sympy.ImmutableMatrix(A.applyfunc(sympy.expand)),
        sympy.ImmutableMatrix(B.applyfunc(sympy.expand)),
    )


def diagonalize(system: OdeSystem, rho_sqrt: RhoSqrt) -> Diagonalization:
    """
    Conjugate A to diagonal form with P = (√2/2)·[[√ρ, 1], [√ρ, −1]].

    For n < 0 the rows of P are swapped so that λ₁ > 0 > λ₂; this swaps b₂
    and b₃ and leaves their product unchanged.
    """
    r = _as_sympy(rho_sqrt)
    P = sympy.sqrt(2) / 2 * sympy.Matrix([[r, 1], [r, -1]])
    if system.sector.n < 0:
        P = P.extract([1, 0], [0, 1])
    P_inv = P.inv()
    D = (P * system.A * P_inv).applyfunc(sympy.simplify)
    C = (P * system.B * P_inv).applyfunc(sympy.simplify)
    if D[0, 1] != 0 or D[1, 0] != 0:
        raise RuntimeError(f"P failed to diagonalize A: {D}")
    return Diagonalization(
        D[0, 0], D[1, 1], C[0, 0], C[0, 1], C[1, 0], C[1, 1], sympy.ImmutableMatrix(P)
    )


def b2b3_closed_form(k: int, n: int, d: RationalLike, rho_sqrt: RhoSqrt) -> sympy.Expr:
    """b₂b₃ = 4π²k² + n²/(16d²ρ) − 4π²d² − i·kbπ with b = 8πd."""
    d_sym = _as_sympy(Fraction(d))
    rho = _as_sympy(rho_sqrt) ** 2
    pi = sympy.pi
    return sympy.expand(
        4 * pi**2 * k**2
        + sympy.Integer(n) ** 2 / (16 * d_sym**2 * rho)
        - 4 * pi**2 * d_sym**2
        - sympy.I * k * (8 * pi * d_sym) * pi
    )


def l2_solvable(sector: WBSector, t: TParam) -> StokesCertificate | None:
    """
    Decide whether a sector carries a Schwartz solution.

    k ≠ 0 is excluded by the imaginary part −kbπ of b₂b₃. In pi_rational mode
    t is transcendental and no integer pair (n, u) can satisfy the quadratic
    relation. In quadratic mode u = (n² − t²)/(8|n|t) is computed exactly.

    Returns:
        A certificate with multiplicity 1, or None
    """
    if sector.k != 0:
        return None
    if t.mode is TMode.PI_RATIONAL:
        return None
    assert isinstance(t.value, QuadExt)
    n = sector.n
    u = (QuadExt(n * n) - t.value * t.value) / (t.value * (8 * abs(n)))
    if not quad_is_negative_integer(u):
        return None
    return StokesCertificate(n=n, u=int(u.x), multiplicity=1)


def h_double_prime(t: TParam, nmax: int) -> tuple[int, list[StokesCertificate]]:
    """
    Count the harmonic forms of all Weil-Brezin sectors with 0 < |n| ≤ nmax.

    Solvability does not depend on m, so each solvable n contributes |n|.

    Args:
        t: The solvability scalar
        nmax: Enumeration bound, at least 1

    Returns:
        (count, certificates sorted by (|n|, n < 0, u))

    Raises:
        ValueError: If nmax < 1
    """
    if nmax < 1:
        raise ValueError(f"nmax must be at least 1, got {nmax}")
    if t.mode is TMode.PI_RATIONAL:
        logging.debug(f"t = {t} is transcendental, no Weil-Brezin solutions")
        return 0, []

    certificates = []
    for magnitude in range(1, nmax + 1):
        for n in (magnitude, -magnitude):
            certificate = l2_solvable(WBSector(0, 0, n), t)
            if certificate is not None:
                logging.info(f"Stokes certificate for t = {t}: n={n}, u={certificate.u}")
                certificates.append(replace(certificate, multiplicity=abs(n)))
    certificates.sort(key=lambda c: (abs(c.n), c.n < 0, c.u))
    return sum(c.multiplicity for c in certificates), certificates


def solvable_t(n: int, u: int) -> QuadExt:
    """
    The positive t making (n, u) a certificate: t = |n|(−4u + √(16u² + 1)).

    Raises:
        ValueError: If n is zero or u is not negative
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    if u >= 0:
        raise ValueError(f"u must be negative, got {u}")
    return QuadExt(-4 * u * abs(n), abs(n), 16 * u * u + 1)


def rho_sqrt_from_t(t: TParam, d: RationalLike) -> sympy.Expr:
    """√ρ = t/(8πd²), exact."""
    d = Fraction(d)
    if d <= 0:
        raise ValueError(f"d must be positive, got {d}")
    return sympy.simplify(t.to_sympy() / (8 * sympy.pi * _as_sympy(d) ** 2))
