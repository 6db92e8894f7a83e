"""
Floating-point oracle for the exact sector counts.

Weil-Brezin sectors are checked by a Hermite-function Galerkin discretization
of y′ = (Ax + B)y, toral sectors by singular values of their 2×2 systems.
Nothing computed here feeds back into the exact results.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.linalg

from .lattice import ToralSector, ToralSolution
from .stokes import WBSector

MIN_BASIS_SIZE = 8
DEFAULT_THRESHOLD = 1e-8
DEFAULT_GAP = 1e3
TORAL_EPSILON = 1e-12


@dataclass(frozen=True)
class HermiteBasisConfig:
    """
    Discretization settings for :func:`ode_kernel_dim`.

    Sizes below MIN_BASIS_SIZE are accepted but always yield an
    indeterminate verdict.

    Attributes:
        size: Number of Hermite functions per component
        scale: Width σ of the basis; derived from A when None
        threshold: Kernel threshold relative to the operator scale
        gap: Required ratio between the first non-kernel singular value and the threshold
    """

    size: int = 256
    scale: float | None = None
    threshold: float = DEFAULT_THRESHOLD
    gap: float = DEFAULT_GAP

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"Basis size must be positive, got {self.size}")
        if self.scale is not None and not self.scale > 0:
            raise ValueError(f"Hermite scale must be positive, got {self.scale}")
        if not 0 < self.threshold < 1:
            raise ValueError(f"Threshold must lie in (0, 1), got {self.threshold}")
        if not self.gap > 1:
            raise ValueError(f"Gap factor must exceed 1, got {self.gap}")

    @property
    def resolved(self) -> bool:
        return self.size >= MIN_BASIS_SIZE

    def to_dict(self) -> dict[str, Any]:
        return {
            "size": self.size,
            "scale": self.scale,
            "threshold": self.threshold,
            "gap": self.gap,
        }


@dataclass(frozen=True)
class KernelEstimate:
    """
    Numerical kernel dimension of a discretized ODE operator.

    ``dim`` is None when the verdict is indeterminate; ``reason`` then says why.
    Singular values are sorted ascending.
    """

    dim: int | None
    singular_values: np.ndarray
    sigma: float
    epsilon: float
    kernel_vector: np.ndarray | None = None
    reason: str | None = None

    @property
    def indeterminate(self) -> bool:
        return self.dim is None

    def to_dict(self, count: int = 8) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "smallest_singular_values": [float(s) for s in self.singular_values[:count]],
            "sigma": self.sigma,
            "epsilon": self.epsilon,
            "reason": self.reason,
        }


def hermite_functions(
    x: np.ndarray | float, size: int, scale: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """
    Evaluate scaled Hermite functions φ_j(x) = σ^{-1/2}ψ_j(x/σ) and their derivatives.

    Uses the three-term recurrence of the L²-normalized functions ψ_j, which
    stays stable for large j.

    Args:
        x: Evaluation points
        size: Number of functions
        scale: Width σ

    Returns:
        (values, derivatives), each of shape (size, *x.shape)
    """
    s = np.asarray(x, dtype=float) / scale
    psi = np.zeros((size + 1, *s.shape))
    psi[0] = np.pi**-0.25 * np.exp(-(s**2) / 2)
    if size >= 1:
        psi[1] = math.sqrt(2.0) * s * psi[0]
    for j in range(1, size):
        psi[j + 1] = math.sqrt(2.0 / (j + 1)) * s * psi[j] - math.sqrt(j / (j + 1)) * psi[j - 1]

    derivative = np.zeros((size, *s.shape))
    for j in range(size):
        derivative[j] = -math.sqrt((j + 1) / 2) * psi[j + 1]
        if j > 0:
            derivative[j] += math.sqrt(j / 2) * psi[j - 1]
    return psi[:size] / math.sqrt(scale), derivative / scale**1.5


def ladder_operators(size: int, sigma: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Multiplication by x, d/dx and the embedding, as (size + 1) × size matrices.

    The rectangular shape keeps the images of the first ``size`` basis
    functions exact.
    """
    j = np.arange(size)
    X = np.zeros((size + 1, size))
    D = np.zeros((size + 1, size))
    X[j[1:] - 1, j[1:]] = sigma * np.sqrt(j[1:] / 2)
    X[j + 1, j] = sigma * np.sqrt((j + 1) / 2)
    D[j[1:] - 1, j[1:]] = np.sqrt(j[1:] / 2) / sigma
    D[j + 1, j] = -np.sqrt((j + 1) / 2) / sigma
    return X, D, np.eye(size + 1, size)


def galerkin_operator(A: np.ndarray, B: np.ndarray, size: int, sigma: float) -> np.ndarray:
    """The matrix of y ↦ y′ − (Ax + B)y on two components of ``size`` Hermite functions."""
    X, D, E = ladder_operators(size, sigma)
    return np.kron(np.eye(2), D) - np.kron(A, X) - np.kron(B, E)


def _positive_eigenvalue(A: np.ndarray) -> float:
    eigenvalues = np.linalg.eigvals(A)
    magnitude = float(np.max(np.abs(eigenvalues)))
    real = np.sort(eigenvalues.real)
    if magnitude == 0 or np.max(np.abs(eigenvalues.imag)) > 1e-9 * magnitude:
        raise ValueError(f"A must have real eigenvalues, got {eigenvalues}")
    if not real[0] < 0 < real[1]:
        raise ValueError(f"A must have eigenvalues λ₁ > 0 > λ₂, got {real}")
    return float(real[1])


def ode_kernel_dim(
    A: np.ndarray, B: np.ndarray, cfg: HermiteBasisConfig | None = None
) -> KernelEstimate:
    """
    Estimate the dimension of the L² solution space of y′ = (Ax + B)y.

    Singular values below ε = threshold·(‖A‖σ + ‖B‖ + 1/σ) count as kernel;
    the next one must exceed gap·ε or the verdict is indeterminate.

    Args:
        A: 2×2 matrix with eigenvalues λ₁ > 0 > λ₂
        B: 2×2 complex matrix
        cfg: Basis configuration; σ defaults to 1/√λ₁

    Returns:
        The estimate, with the kernel vector as a (2, size) coefficient array when dim ≥ 1

    Raises:
        ValueError: If A does not have real eigenvalues of opposite sign
    """
    cfg = cfg or HermiteBasisConfig()
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    lam = _positive_eigenvalue(A)
    sigma = cfg.scale if cfg.scale is not None else 1.0 / math.sqrt(lam)

    L = galerkin_operator(A, B, cfg.size, sigma)
    _, s, Vh = scipy.linalg.svd(L, full_matrices=False)
    ascending = s[::-1]
    reference = np.linalg.norm(A, 2) * sigma + np.linalg.norm(B, 2) + 1.0 / sigma
    epsilon = float(cfg.threshold * reference)

    if not cfg.resolved:
        reason = f"basis size {cfg.size} below minimum {MIN_BASIS_SIZE}"
        logging.warning(f"Indeterminate kernel estimate: {reason}")
        return KernelEstimate(None, ascending, sigma, epsilon, reason=reason)

    dim = int(np.count_nonzero(ascending < epsilon))
    if dim == len(ascending) or ascending[dim] <= cfg.gap * epsilon:
        reason = (
            f"no gap above ε = {epsilon:.3e} "
            f"(next singular value {ascending[min(dim, len(ascending) - 1)]:.3e})"
        )
        logging.warning(f"Indeterminate kernel estimate: {reason}")
        return KernelEstimate(None, ascending, sigma, epsilon, reason=reason)

    kernel = None
    if dim >= 1:
        kernel = Vh[-1].conj().reshape(2, cfg.size)
        kernel = kernel / np.max(np.abs(kernel))
    logging.debug(f"Kernel estimate dim={dim}, smallest singular values {ascending[:3]}")
    return KernelEstimate(dim, ascending, sigma, epsilon, kernel_vector=kernel)


def toral_matrix(sector: ToralSector, b: float, rho: float) -> np.ndarray:
    """The 2×2 toral system [[−m, k + il − ib/4π], [ρ(k − il), m]] in floating point."""
    k, l, m = sector.k, sector.l, sector.m  # noqa: E741
    return np.array(
        [[-m, k + 1j * l - 1j * b / (4 * np.pi)], [rho * (k - 1j * l), m]], dtype=complex
    )


def toral_nullity(
    sector: ToralSector, b: float, rho: float, epsilon: float = TORAL_EPSILON
) -> int:
    """
    Nullity of a toral system from singular values below ε·‖M‖.

    Raises:
        ValueError: If rho is not positive
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    s = np.linalg.svd(toral_matrix(sector, b, rho), compute_uv=False)
    return int(np.count_nonzero(s < epsilon * s[0]))


def toral_nullity_scan(b: float, rho: float, box: int, epsilon: float = TORAL_EPSILON) -> int:
    """Sum of toral nullities over [−box, box]³, batched one k-slice at a time."""
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    axis = np.arange(-box, box + 1)
    l_grid, m_grid = np.meshgrid(axis, axis, indexing="ij")
    total = 0
    for k in axis:
        M = np.empty((*l_grid.shape, 2, 2), dtype=complex)
        M[..., 0, 0] = -m_grid
        M[..., 0, 1] = k + 1j * l_grid - 1j * b / (4 * np.pi)
        M[..., 1, 0] = rho * (k - 1j * l_grid)
        M[..., 1, 1] = m_grid
        s = np.linalg.svd(M, compute_uv=False)
        total += int(np.count_nonzero(s < epsilon * s[..., :1]))
    return total


@dataclass(frozen=True)
class WBSolution:
    """
    Numerical Weil-Brezin profile (F, G) = Σ_j c_j φ_j for one sector.

    Attributes:
        sector: The (k, m, n) sector
        coefficients: Hermite coefficients of shape (2, size)
        sigma: Basis width
    """

    sector: WBSector
    coefficients: np.ndarray
    sigma: float

    @classmethod
    def from_estimate(cls, sector: WBSector, estimate: KernelEstimate) -> "WBSolution":
        if estimate.kernel_vector is None:
            raise ValueError("Kernel estimate has no kernel vector")
        return cls(sector, estimate.kernel_vector, estimate.sigma)

    def profile(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(F, F′, G, G′) at the points u."""
        values, derivatives = hermite_functions(u, self.coefficients.shape[1], self.sigma)
        F = np.tensordot(self.coefficients[0], values, axes=1)
        G = np.tensordot(self.coefficients[1], values, axes=1)
        dF = np.tensordot(self.coefficients[0], derivatives, axes=1)
        dG = np.tensordot(self.coefficients[1], derivatives, axes=1)
        return F, dF, G, dG


@dataclass(frozen=True)
class WeilBrezinValue:
    value: complex
    tail_bound: float


def _wb_phase(sector: WBSector, xi: int, t: Any, y: Any, z: Any) -> Any:
    return np.exp(2j * np.pi * (sector.k * t + (sector.m + sector.n * xi) * y + sector.n * z))


def weil_brezin_evaluate(
    coeffs: np.ndarray,
    sector: WBSector,
    point: tuple[float, float, float, float],
    truncation: int,
    scale: float = 1.0,
) -> WeilBrezinValue:
    """
    Evaluate Σ_{|ξ| ≤ Ξ} F(x + ξ)e^{2πi(kt + (m + nξ)y + nz)} with F = Σ_j c_j φ_j.

    The tail bound sums |F(x + ξ)| over Ξ < |ξ| ≤ 2Ξ + 8, where the
    Gaussian decay of the Hermite functions makes further terms negligible.

    Args:
        coeffs: Hermite coefficients of F
        sector: The (k, m, n) sector
        point: (t, x, y, z)
        truncation: Ξ, at least 1
        scale: Width σ of the Hermite basis

    Returns:
        The truncated value and the tail bound

    Raises:
        ValueError: If truncation < 1
    """
    if truncation < 1:
        raise ValueError(f"truncation must be at least 1, got {truncation}")
    coeffs = np.asarray(coeffs, dtype=complex)
    t, x, y, z = point
    xi = np.arange(-(2 * truncation + 8), 2 * truncation + 9)
    values, _ = hermite_functions(x + xi, len(coeffs), scale)
    F = coeffs @ values
    inside = np.abs(xi) <= truncation
    phases = np.array([_wb_phase(sector, int(k), t, y, z) for k in xi[inside]])
    return WeilBrezinValue(
        value=complex(np.sum(F[inside] * phases)),
        tail_bound=float(np.sum(np.abs(F[~inside]))),
    )


@dataclass(frozen=True)
class GridSample:
    """Uniform sample of the fundamental domain [0, 1)⁴ in (t, x, y, z)."""

    resolution: int = 4
    points: tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.resolution < 4:
            raise ValueError(f"Grid resolution must be at least 4, got {self.resolution}")
        axis = np.arange(self.resolution) / self.resolution
        points = tuple(np.meshgrid(axis, axis, axis, axis, indexing="ij"))
        object.__setattr__(self, "points", points)

    def sample(
        self, solution: ToralSolution | WBSolution, truncation: int = 12
    ) -> tuple[np.ndarray, np.ndarray]:
        """Values of (f, g) at every grid point."""
        t, x, y, z = self.points
        if isinstance(solution, ToralSolution):
            sector = solution.sector
            mode = np.exp(2j * np.pi * (sector.k * t + sector.l * x + sector.m * y))
            return complex(solution.f_coeff) * mode, complex(solution.g_coeff) * mode
        f = np.zeros(t.shape, dtype=complex)
        g = np.zeros(t.shape, dtype=complex)
        for xi in range(-truncation, truncation + 1):
            F, _, G, _ = solution.profile(x + xi)
            phase = _wb_phase(solution.sector, xi, t, y, z)
            f += F * phase
            g += G * phase
        return f, g


def pde_residual(
    solution: ToralSolution | WBSolution,
    b: float,
    rho: float,
    a: float,
    grid: GridSample,
    truncation: int = 12,
) -> float:
    """
    Largest modulus of −V̄₂(f) + V̄₁(g) + (b/4)g and ρV₁(f) + V₂(g) on the grid.

    Derivatives act exactly on the sector ansatz: on e^{2πi(kt+lx+my)} and on
    each Weil-Brezin summand F(u)e^{2πi(kt+(m+nξ)y+nz)} with u = x + ξ.
    """
    t, x, y, z = grid.points
    if isinstance(solution, ToralSolution):
        k, l, m = solution.sector.k, solution.sector.l, solution.sector.m  # noqa: E741
        F, G = complex(solution.f_coeff), complex(solution.g_coeff)
        v1 = np.pi * (l + 1j * k)
        vb1 = np.pi * (1j * k - l)
        v2 = vb2 = np.pi * 1j * m
        mode = np.exp(2j * np.pi * (k * t + l * x + m * y))
        first = (-vb2 * F + vb1 * G + b / 4 * G) * mode
        second = (rho * v1 * F + v2 * G) * mode
        return float(max(np.max(np.abs(first)), np.max(np.abs(second))))

    k, m, n = solution.sector.k, solution.sector.m, solution.sector.n
    first = np.zeros(t.shape, dtype=complex)
    second = np.zeros(t.shape, dtype=complex)
    for xi in range(-truncation, truncation + 1):
        u = x + xi
        F, dF, G, dG = solution.profile(u)
        phase = _wb_phase(solution.sector, xi, t, y, z)
        v1_f = 0.5 * (2j * np.pi * k * F - 1j * dF)
        vb1_g = 0.5 * (2j * np.pi * k * G + 1j * dG)
        v2_g = 0.5 * (2j * np.pi * (m + n * u) - (a - 1j) / b * 2j * np.pi * n) * G
        vb2_f = 0.5 * (2j * np.pi * (m + n * u) - (a + 1j) / b * 2j * np.pi * n) * F
        first += (-vb2_f + vb1_g + b / 4 * G) * phase
        second += (rho * v1_f + v2_g) * phase
    return float(max(np.max(np.abs(first)), np.max(np.abs(second))))


def diagnostics_dump(
    config: HermiteBasisConfig,
    stokes: dict[str, KernelEstimate] | None = None,
    toral: dict[str, int] | None = None,
    residuals: dict[str, float] | None = None,
) -> dict[str, Any]:
    """JSON-ready record of a verification run."""
    return {
        "basis": config.to_dict(),
        "stokes": {label: est.to_dict() for label, est in (stokes or {}).items()},
        "toral": dict(toral or {}),
        "residuals": dict(residuals or {}),
    }
