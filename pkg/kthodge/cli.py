"""
Command-line front end.

Subcommands:
  kthodge compute --d 1 --sqrt-rho 2
  kthodge sweep --d-list 1 --sqrt-rho-list 1,3/2,2 --out table.csv
  kthodge verify --d 1 --t "4+1*sqrt(17)" --nmax 2
  kthodge derive --check-all

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
3 indeterminate verification.
"""

import argparse
import csv
import io
import json
import logging
import math
import shlex
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

from . import __version__
from .exterior import (
    Form,
    check_identities,
    dbar,
    derive_harmonic_system,
    format_scalar,
    harmonic_form,
    hodge_star,
    partial,
    standard_structure,
    star_side_terms,
)
from .hodge import compute_h01, sweep, toral_count
from .lattice import LatticeCount, sufficient_box
from .numbers import QuadExt, format_rational, parse_quad, parse_rational
from .report import CSV_COLUMNS, HodgeReport, StructureParams
from .settings import get_default_basis_size, get_log_level, validate_log_level
from .spectral import (
    MIN_BASIS_SIZE,
    GridSample,
    HermiteBasisConfig,
    KernelEstimate,
    WBSolution,
    diagnostics_dump,
    ode_kernel_dim,
    pde_residual,
    toral_nullity,
    toral_nullity_scan,
)
from .stokes import WBSector, build_ode_system, rho_sqrt_from_t

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3

RESIDUAL_TOLERANCE = 1e-6
# Largest box the float toral scan is run on during verify.
MAX_SCAN_BOX = 48


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class Claim:
    """Outcome of one numerical confirmation."""

    label: str
    verdict: Verdict
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.label}: {self.verdict.value}" + (f" ({self.detail})" if self.detail else "")

    def to_dict(self) -> dict[str, str]:
        return {"label": self.label, "verdict": self.verdict.value, "detail": self.detail}


class _RowParser(argparse.ArgumentParser):
    """Parser for one grid-file line; reports problems as ValueError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ValueError(message)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _quad(text: str) -> QuadExt:
    try:
        return parse_quad(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(item) for item in text.split(",") if item.strip()]


def _quad_list(text: str) -> list[QuadExt]:
    return [_quad(item) for item in text.split(",") if item.strip()]


def _add_structure_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=_rational, required=True, help="d = b/8π as p/q")
    value = parser.add_mutually_exclusive_group(required=True)
    value.add_argument("--sqrt-rho", type=_rational, help="√ρ as p/q")
    value.add_argument("--t", type=_quad, help='t = 8πd²√ρ as "p/q+p/q*sqrt(D)"')
    parser.add_argument("--a", type=_rational, default=Fraction(0), help="a as p/q (default 0)")
    parser.add_argument("--nmax", type=int, help="bound on |n| for Weil-Brezin sectors")


def _add_output_flags(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--format", choices=["table", "json", "csv"], default=default_format)
    parser.add_argument("--out", type=Path, help="write output to this file instead of stdout")


def _params_from_args(args: argparse.Namespace) -> StructureParams:
    """
    Build validated parameters from parsed flags.

    Raises:
        ValueError: If a value breaks the parameter contract; the message names the flag
    """
    if args.d <= 0:
        raise ValueError(f"--d must be positive, got {format_rational(args.d)}")
    if args.sqrt_rho is not None and args.sqrt_rho <= 0:
        raise ValueError(f"--sqrt-rho must be positive, got {format_rational(args.sqrt_rho)}")
    if args.t is not None and args.t.sign() <= 0:
        raise ValueError(f"--t must be positive, got {args.t}")
    if args.nmax is not None and args.nmax < 1:
        raise ValueError(f"--nmax must be at least 1, got {args.nmax}")
    params = _row_params(args)
    params.validate()
    return params


def _row_params(args: argparse.Namespace) -> StructureParams:
    extra = {} if args.nmax is None else {"nmax": args.nmax}
    return StructureParams(d=args.d, sqrt_rho=args.sqrt_rho, t=args.t, a=args.a, **extra)


def _write(path: Path, text: str, flag: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ValueError(f"{flag}: cannot write {path}: {e}") from e


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        _write(out, text, "--out")


def _csv_text(rows: Sequence[dict[str, str]], columns: Sequence[str]) -> str:
    stream = io.StringIO()
    writer = csv.DictWriter(stream, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return stream.getvalue()


def _render_report(report: HodgeReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        return _csv_text([report.csv_row()], CSV_COLUMNS)
    return report.to_table() + "\n"


def cmd_compute(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    _emit(_render_report(compute_h01(params), args.format), args.out)
    return EXIT_OK


def _grid_from_file(path: Path) -> list[StructureParams]:
    """
    Parse a grid file: one parameter set per line in the compute flag grammar.

    Blank lines and lines starting with # are skipped. The whole file is parsed
    before anything is computed.

    Raises:
        ValueError: If the file cannot be read or a line does not parse
    """
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ValueError(f"--grid: cannot read {path}: {e}") from e
    row_parser = _RowParser(prog="grid row", add_help=False)
    _add_structure_flags(row_parser)
    grid = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            grid.append(_row_params(row_parser.parse_args(shlex.split(stripped))))
        except ValueError as e:
            raise ValueError(f"--grid: line {number}: {e}") from e
    return grid


def _grid_from_lists(args: argparse.Namespace) -> list[StructureParams]:
    extra = {} if args.nmax is None else {"nmax": args.nmax}
    grid = []
    for d in args.d_list:
        for sqrt_rho in args.sqrt_rho_list:
            grid.append(StructureParams(d=d, sqrt_rho=sqrt_rho, a=args.a, **extra))
        for t in args.t_list:
            grid.append(StructureParams(d=d, t=t, a=args.a, **extra))
    return grid


def cmd_sweep(args: argparse.Namespace) -> int:
    grid = _grid_from_file(args.grid) if args.grid is not None else _grid_from_lists(args)
    logging.info(f"Sweeping {len(grid)} parameter sets with {args.workers} worker(s)")
    results = sweep(grid, workers=args.workers)
    _emit(_csv_text([result.csv_row() for result in results], CSV_COLUMNS), args.out)
    return EXIT_OK


def _float_rho(params: StructureParams) -> float:
    if params.sqrt_rho is not None:
        return float(params.sqrt_rho) ** 2
    return float(rho_sqrt_from_t(params.t_param, params.d)) ** 2


def _toral_claims(
    params: StructureParams,
    lattice: LatticeCount,
    b: float,
    rho: float,
    grid: GridSample,
    residuals: dict[str, float],
) -> list[Claim]:
    claims = []
    for point, solution in zip(lattice.points, lattice.solutions, strict=True):
        nullity = toral_nullity(point.sector, b, rho)
        residual = pde_residual(solution, b, rho, float(params.a), grid)
        label = f"toral l={point.l} m={point.m} ({point.kind.value})"
        residuals[label] = residual
        passed = nullity == 1 and residual < RESIDUAL_TOLERANCE
        claims.append(
            Claim(
                label,
                Verdict.PASS if passed else Verdict.FAIL,
                f"nullity={nullity}, residual={residual:.2e}",
            )
        )
    if params.sqrt_rho is not None:
        box = sufficient_box(params.d, params.sqrt_rho)
        if box <= MAX_SCAN_BOX:
            total = toral_nullity_scan(b, rho, box)
            claims.append(
                Claim(
                    f"toral scan box={box}",
                    Verdict.PASS if total == lattice.h_prime else Verdict.FAIL,
                    f"nullity={total}, h'={lattice.h_prime}",
                )
            )
        else:
            logging.info(f"Skipping toral scan: box {box} exceeds {MAX_SCAN_BOX}")
    return claims


def _stokes_claims(
    report: HodgeReport,
    cfg: HermiteBasisConfig,
    b: float,
    rho: float,
    grid: GridSample,
    estimates: dict[str, KernelEstimate],
    residuals: dict[str, float],
) -> list[Claim]:
    params = report.params
    rho_sqrt = rho_sqrt_from_t(params.t_param, params.d)
    claims = []
    for certificate in report.stokes_certificates:
        for m in range(abs(certificate.n)):
            sector = WBSector(0, m, certificate.n)
            label = f"stokes n={certificate.n} u={certificate.u} m={m}"
            A, B = build_ode_system(sector, params.a, params.d, rho_sqrt).numeric()
            estimate = ode_kernel_dim(A, B, cfg)
            estimates[label] = estimate
            if estimate.dim is None:
                claims.append(Claim(label, Verdict.INDETERMINATE, estimate.reason or ""))
                continue
            smallest = estimate.singular_values[0]
            detail = f"dim={estimate.dim}, smallest singular value={smallest:.2e}"
            if estimate.dim != 1:
                claims.append(Claim(label, Verdict.FAIL, detail))
                continue
            solution = WBSolution.from_estimate(sector, estimate)
            residual = pde_residual(solution, b, rho, float(params.a), grid)
            residuals[label] = residual
            verdict = Verdict.PASS if residual < RESIDUAL_TOLERANCE else Verdict.FAIL
            claims.append(Claim(label, verdict, f"{detail}, residual={residual:.2e}"))
    return claims


def cmd_verify(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    cfg = HermiteBasisConfig(
        size=args.basis_size if args.basis_size is not None else get_default_basis_size(),
        scale=args.hermite_scale,
        threshold=args.threshold,
    )
    lattice = toral_count(params)
    report = compute_h01(params, lattice)
    b = 8 * math.pi * float(params.d)
    rho = _float_rho(params)
    grid = GridSample()

    claims = []
    if not cfg.resolved:
        detail = f"size {cfg.size} below minimum {MIN_BASIS_SIZE}"
        claims.append(Claim("hermite basis", Verdict.INDETERMINATE, detail))
    residuals: dict[str, float] = {}
    estimates: dict[str, KernelEstimate] = {}
    claims.extend(_toral_claims(params, lattice, b, rho, grid, residuals))
    claims.extend(_stokes_claims(report, cfg, b, rho, grid, estimates, residuals))

    verdicts = {claim.verdict for claim in claims}
    if Verdict.FAIL in verdicts:
        overall, code = Verdict.FAIL, EXIT_FAIL
    elif Verdict.INDETERMINATE in verdicts:
        overall, code = Verdict.INDETERMINATE, EXIT_INDETERMINATE
    else:
        overall, code = Verdict.PASS, EXIT_OK

    if args.dump is not None:
        toral = {f"l={p.l} m={p.m}": toral_nullity(p.sector, b, rho) for p in lattice.points}
        dump = diagnostics_dump(cfg, estimates, toral, residuals)
        _write(args.dump, json.dumps(dump, indent=2, ensure_ascii=False) + "\n", "--dump")

    if args.format == "json":
        document = {
            "report": report.to_dict(),
            "claims": [claim.to_dict() for claim in claims],
            "verdict": overall.value,
        }
        text = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    elif args.format == "csv":
        text = _csv_text([claim.to_dict() for claim in claims], ["label", "verdict", "detail"])
    else:
        lines = [report.to_table(), *(str(claim) for claim in claims), f"verify: {overall.value}"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return code


def _scalar_form(form: Form) -> str:
    if form.is_zero():
        return "0"
    return " + ".join(f"[{format_scalar(c)}]{Form.word_label(w)}" for w, c in form.items())


def derivation_transcript() -> list[str]:
    """The symbolic derivation of the harmonic system, one line per step."""
    structure = standard_structure()
    s = harmonic_form()
    starred = hodge_star(s)
    lines = ["Structure equations"]
    for index, label in enumerate(Form.SINGLE_LABELS):
        lines.append(f"  d{label} = {structure.differential(index)}")
    lines.append("Hodge star")
    for index in (2, 3):
        lines.append(f"  *{Form.SINGLE_LABELS[index]} = {hodge_star(Form.generator(index))}")
    lines.append(f"s = {_scalar_form(s)}")
    lines.append(f"∂̄s = {_scalar_form(dbar(s, structure))}")
    lines.append(f"*s = {_scalar_form(starred)}")
    lines.append(f"∂(*s) = {_scalar_form(partial(starred, structure))}")
    lines.append("Leibniz terms of ∂(*s) on φ^{121̄2̄}")
    for term, coeff in star_side_terms(structure):
        lines.append(f"  {term.describe()}: {format_scalar(coeff)}")
    lines.append("Harmonic system")
    for equation in derive_harmonic_system(structure):
        lines.append(f"  {equation}")
    return lines


def cmd_derive(args: argparse.Namespace) -> int:
    lines = derivation_transcript()
    code = EXIT_OK
    if args.check_all:
        checks = check_identities()
        lines.append("Identity checks")
        lines.extend(f"  {check}" for check in checks)
        if not all(check.passed for check in checks):
            code = EXIT_FAIL
    sys.stdout.write("\n".join(lines) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kthodge",
        description="Almost-complex Hodge number h^{0,1} of the Kodaira-Thurston manifold",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        help="logging level (default from KTHODGE_LOG_LEVEL, else WARNING)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_compute = subparsers.add_parser("compute", help="compute h^{0,1} for one structure")
    _add_structure_flags(p_compute)
    _add_output_flags(p_compute, "json")
    p_compute.set_defaults(handler=cmd_compute)

    p_sweep = subparsers.add_parser("sweep", help="compute a parameter grid into CSV")
    source = p_sweep.add_mutually_exclusive_group(required=True)
    source.add_argument("--grid", type=Path, help="file with one set of compute flags per line")
    source.add_argument("--d-list", type=_rational_list, help="comma-separated values of d")
    p_sweep.add_argument("--sqrt-rho-list", type=_rational_list, default=[])
    p_sweep.add_argument("--t-list", type=_quad_list, default=[])
    p_sweep.add_argument("--a", type=_rational, default=Fraction(0))
    p_sweep.add_argument("--nmax", type=int)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--out", type=Path, help="CSV output file (default stdout)")
    p_sweep.set_defaults(handler=cmd_sweep)

    p_verify = subparsers.add_parser("verify", help="confirm every sector claim numerically")
    _add_structure_flags(p_verify)
    _add_output_flags(p_verify, "table")
    p_verify.add_argument("--basis-size", type=int, help="Hermite functions per component")
    p_verify.add_argument("--hermite-scale", type=float, help="Hermite basis width σ")
    p_verify.add_argument("--threshold", type=float, default=1e-8)
    p_verify.add_argument("--dump", type=Path, help="write spectral diagnostics JSON here")
    p_verify.set_defaults(handler=cmd_verify)

    p_derive = subparsers.add_parser("derive", help="print the symbolic derivation")
    p_derive.add_argument("--check-all", action="store_true", help="run every identity check")
    p_derive.set_defaults(handler=cmd_derive)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        level = validate_log_level(args.log_level) if args.log_level else get_log_level()
    except ValueError as e:
        print(f"kthodge: error: --log-level: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(message)s")

    try:
        return int(args.handler(args))
    except ValueError as e:
        print(f"kthodge {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"kthodge {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
