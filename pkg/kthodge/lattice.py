"""
Exact solver for the toral (n = 0) Fourier sectors.

A sector H_{k,l,m,0} carries a harmonic (0,1)-form exactly when the 2×2
system M·(f, g) = 0 is singular. This happens only for k = 0 and lattice
points (l, m/√ρ) of ℤ × (1/√ρ)ℤ on the circle of radius d centred at (d, 0).
For b < 0 the same count holds after the reflection l → −l.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .numbers import GaussianRational, RationalLike, rational_is_perfect_square

Row2 = tuple[GaussianRational, GaussianRational]
Matrix2 = tuple[Row2, Row2]
"""Type alias for an exact 2×2 matrix over the Gaussian rationals, stored row-major."""

# Largest magnitude safely handled by the int64 scan before switching to Python integers.
_INT64_SAFE_BOUND = 2**62


class PointKind(str, Enum):
    ORIGIN = "origin"
    ANTIPODE = "antipode"
    INTERIOR = "interior"


@dataclass(frozen=True)
class ToralSector:
    """Fourier mode e^{2πi(kt + lx + my)} with n = 0."""

    k: int
    l: int  # noqa: E741
    m: int


@dataclass(frozen=True)
class LatticePoint:
    l: int  # noqa: E741
    m: int
    kind: PointKind

    @property
    def sector(self) -> ToralSector:
        return ToralSector(0, self.l, self.m)


@dataclass(frozen=True)
class ToralSolution:
    """A harmonic toral mode f = f_coeff·e^{2πi(lx+my)}, g = g_coeff·e^{2πi(lx+my)}."""

    sector: ToralSector
    f_coeff: GaussianRational
    g_coeff: GaussianRational


class LatticeCount(NamedTuple):
    h_prime: int
    points: list[LatticePoint]
    solutions: list[ToralSolution]


def _require_positive(name: str, value: RationalLike) -> Fraction:
    value = Fraction(value)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def toral_system_matrix(sector: ToralSector, d: RationalLike, rho: RationalLike) -> Matrix2:
    """
    Build the 2×2 system of a toral sector.

    Rows are [−m, k + i(l − 2d)] and [ρ(k − il), m]; b/4π is written as 2d.

    Args:
        sector: The (k, l, m) mode
        d: b/8π
        rho: Metric parameter ρ

    Returns:
        The matrix whose kernel is the sector's solution space

    Raises:
        ValueError: If rho is not positive
    """
    d = Fraction(d)
    rho = _require_positive("rho", rho)
    k, l, m = sector.k, sector.l, sector.m  # noqa: E741
    return (
        (GaussianRational(-m), GaussianRational(k, l - 2 * d)),
        (GaussianRational(rho * k, -rho * l), GaussianRational(m)),
    )


def determinant(matrix: Matrix2) -> GaussianRational:
    (p, q), (r, s) = matrix
    return p * s - q * r


def nullity(matrix: Matrix2) -> int:
    """Kernel dimension of an exact 2×2 matrix."""
    if all(entry.is_zero() for row in matrix for entry in row):
        return 2
    return 1 if determinant(matrix).is_zero() else 0


def kernel_vector(matrix: Matrix2) -> tuple[GaussianRational, GaussianRational]:
    """
    Spanning vector of a one-dimensional kernel.

    The vector is read off the last nonzero row; when one component vanishes the
    other is scaled to 1.

    Raises:
        ValueError: If the kernel is not one-dimensional
    """
    if nullity(matrix) != 1:
        raise ValueError(f"Kernel is not one-dimensional (nullity {nullity(matrix)})")
    row = matrix[1] if any(not e.is_zero() for e in matrix[1]) else matrix[0]
    first, second = row[1], -row[0]
    if first.is_zero():
        return GaussianRational(0), GaussianRational(1)
    if second.is_zero():
        return GaussianRational(1), GaussianRational(0)
    return first, second


def _interior_points(d: Fraction, rho: Fraction) -> list[LatticePoint]:
    points = []
    for l in range(1, math.ceil(2 * d)):  # noqa: E741
        root = rational_is_perfect_square(rho * l * (2 * d - l))
        if root is not None and root.denominator == 1:
            m = root.numerator
            points.append(LatticePoint(l, m, PointKind.INTERIOR))
            points.append(LatticePoint(l, -m, PointKind.INTERIOR))
    return points


def _boundary_points(d: Fraction) -> list[LatticePoint]:
    points = [LatticePoint(0, 0, PointKind.ORIGIN)]
    if (2 * d).denominator == 1:
        points.append(LatticePoint(int(2 * d), 0, PointKind.ANTIPODE))
    return points


def _solve(points: list[LatticePoint], d: Fraction, rho: Fraction | None) -> LatticeCount:
    solutions = []
    for point in points:
        if rho is None:
            # ρ only enters the interior rows; boundary kernels are (1, 0) and (0, 1).
            f_coeff, g_coeff = (
                (GaussianRational(1), GaussianRational(0))
                if point.kind is PointKind.ORIGIN
                else (GaussianRational(0), GaussianRational(1))
            )
        else:
            f_coeff, g_coeff = kernel_vector(toral_system_matrix(point.sector, d, rho))
        solutions.append(ToralSolution(point.sector, f_coeff, g_coeff))
    logging.debug(f"Toral sectors for d={d}: {len(points)} lattice points")
    return LatticeCount(len(points), points, solutions)


def count_lattice_solutions_for_rho(d: RationalLike, rho: RationalLike) -> LatticeCount:
    """
    Count toral solutions from ρ alone, for ρ rational with √ρ possibly irrational.

    Interior points are found by testing whether ρl(2d − l) is the square of a
    positive integer.

    Raises:
        ValueError: If d or rho is not positive
    """
    d = _require_positive("d", d)
    rho = _require_positive("rho", rho)
    return _solve(_boundary_points(d) + _interior_points(d, rho), d, rho)


def count_lattice_solutions(d: RationalLike, rho_sqrt: RationalLike) -> LatticeCount:
    """
    Count the independent harmonic forms of the toral sectors.

    h′ = 1 + [2d ∈ ℤ] + 2·#{0 < l < 2d : ρl(2d − l) = m² with m a positive integer}.
    Points are listed origin, antipode, then interior points by increasing l
    with +m before −m.

    Args:
        d: b/8π, positive
        rho_sqrt: √ρ, positive

    Returns:
        (h_prime, points, solutions), one solution per point

    Raises:
        ValueError: If d or rho_sqrt is not positive
    """
    rho_sqrt = _require_positive("rho_sqrt", rho_sqrt)
    return count_lattice_solutions_for_rho(d, rho_sqrt * rho_sqrt)


def count_boundary_solutions(d: RationalLike) -> LatticeCount:
    """
    Count toral solutions when ρ is transcendental.

    m² = ρl(2d − l) with l(2d − l) ≠ 0 forces ρ to be rational, so only the
    origin and, when 2d ∈ ℤ, the antipode survive.

    Raises:
        ValueError: If d is not positive
    """
    d = _require_positive("d", d)
    return _solve(_boundary_points(d), d, None)


def sufficient_box(d: RationalLike, rho_sqrt: RationalLike) -> int:
    """Smallest box accepted by the scans that also contains every solution (|m| ≤ √ρ·d)."""
    d, rho_sqrt = Fraction(d), Fraction(rho_sqrt)
    return max(2 * math.ceil(2 * d), math.ceil(rho_sqrt * d))


def brute_force_nullity_scan(d: RationalLike, rho_sqrt: RationalLike, box: int) -> int:
    """
    Sum the nullities of every toral sector in the cube [−box, box]³.

    Works on the determinant scaled to integers. With d = p/q and ρ = r/s,
    q·s·det M = −m²qs − r(k²q + l(lq − 2p)) + 2prk·i, and M never vanishes, so
    a sector has nullity one exactly when both parts are zero.

    Args:
        d: b/8π, positive
        rho_sqrt: √ρ, positive
        box: Half-width of the scanned cube, at least 2·ceil(2d)

    Returns:
        The total kernel dimension found

    Raises:
        ValueError: If d or rho_sqrt is not positive, or the box is too small
    """
    d = _require_positive("d", d)
    rho_sqrt = _require_positive("rho_sqrt", rho_sqrt)
    if box < 2 * math.ceil(2 * d):
        raise ValueError(f"box must be at least {2 * math.ceil(2 * d)}, got {box}")
    rho = rho_sqrt * rho_sqrt
    p, q = d.numerator, d.denominator
    r, s = rho.numerator, rho.denominator

    bound = box * box * (q * s + 2 * r * q) + 2 * r * p * box
    dtype: type = np.int64 if bound < _INT64_SAFE_BOUND else object
    axis = np.arange(-box, box + 1).astype(dtype)
    l_grid, m_grid = np.meshgrid(axis, axis, indexing="ij")
    base = -m_grid * m_grid * (q * s) - r * l_grid * (l_grid * q - 2 * p)

    total = 0
    for k in range(-box, box + 1):
        if 2 * p * r * k != 0:
            continue
        real = base - r * k * k * q
        total += int(np.count_nonzero(real == 0))
    logging.debug(f"Brute-force scan d={d}, rho_sqrt={rho_sqrt}, box={box}: nullity {total}")
    return total
