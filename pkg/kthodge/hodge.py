"""Aggregation of the toral and Weil-Brezin counts into h^{0,1} = h′ + h″."""

import logging
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor

from .lattice import LatticeCount, count_boundary_solutions, count_lattice_solutions
from .report import HodgeReport, StructureParams, SweepResult
from .stokes import h_double_prime


def toral_count(params: StructureParams) -> LatticeCount:
    """
    Solve the toral sectors of one structure.

    Rational √ρ counts on the lattice ℤ × (1/√ρ)ℤ; a quadratic t leaves only
    the origin and antipode.

    Raises:
        ValueError: If the parameters are invalid
    """
    params.validate()
    if params.sqrt_rho is not None:
        return count_lattice_solutions(params.d, params.sqrt_rho)
    return count_boundary_solutions(params.d)


def compute_h01(params: StructureParams, lattice: LatticeCount | None = None) -> HodgeReport:
    """
    Compute h^{0,1} for one structure.

    With √ρ rational the toral count uses the lattice ℤ × (1/√ρ)ℤ. With t
    given in a quadratic field, ρ = t²/(64π²d⁴) is transcendental and only the
    origin and antipode solutions remain. The parameter a is echoed but never
    changes the result.

    Args:
        params: The structure parameters
        lattice: The result of :func:`toral_count` for these parameters, when
            the caller already has it

    Returns:
        The report with lattice points and Stokes certificates

    Raises:
        ValueError: If the parameters are invalid
    """
    params.validate()
    if lattice is None:
        lattice = toral_count(params)
    count, certificates = h_double_prime(params.t_param, params.nmax)
    report = HodgeReport(
        params=params,
        h_prime=lattice.h_prime,
        h_double_prime=count,
        lattice_points=lattice.points,
        stokes_certificates=certificates,
    )
    logging.debug(f"Computed {report!r} for {params.to_dict()}")
    return report


def _sweep_item(params: StructureParams) -> SweepResult:
    try:
        return SweepResult(params, report=compute_h01(params))
    except Exception as e:
        logging.warning(f"Sweep row {params.to_dict()} failed: {e}")
        return SweepResult(params, error=str(e))


def sweep(grid: Iterable[StructureParams], workers: int = 1) -> list[SweepResult]:
    """
    Compute a report for every entry of a parameter grid.

    Failing entries record their error and do not stop the sweep. Results
    follow input order whatever the number of workers.

    Args:
        grid: Parameter sets to compute
        workers: Number of worker processes (1 computes in-process)

    Returns:
        One result per grid entry

    Raises:
        ValueError: If workers < 1
    """
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    items = list(grid)
    if workers == 1 or len(items) <= 1:
        return [_sweep_item(params) for params in items]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_sweep_item, items))
