"""Structure parameters, Hodge reports and their versioned JSON encoding."""

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, TextIO

from .lattice import LatticePoint, PointKind
from .numbers import QuadExt, format_quad, format_rational, parse_quad, parse_rational
from .settings import get_default_nmax
from .stokes import StokesCertificate, TParam

# Report serialization schema version
SCHEMA_VERSION = 1
SUPPORTED_SCHEMA_VERSIONS = [SCHEMA_VERSION]

CSV_COLUMNS = [
    "d",
    "sqrt_rho_or_t",
    "a",
    "nmax",
    "h_prime",
    "h_double_prime",
    "h01",
    "n_lattice_points",
    "n_certificates",
    "error",
]
"""Column order shared by sweep CSV files and ``compute --format csv``."""


@dataclass(frozen=True)
class StructureParams:
    """
    Parameters of one almost-Kähler structure in the family.

    Exactly one of ``sqrt_rho`` (√ρ rational) or ``t`` (t = 8πd²√ρ in a real
    quadratic field) is set. Values are checked by :meth:`validate` rather than
    at construction so that a sweep can record invalid rows.
    """

    d: Fraction
    sqrt_rho: Fraction | None = None
    t: QuadExt | None = None
    a: Fraction = Fraction(0)
    nmax: int = field(default_factory=get_default_nmax)

    def validate(self) -> None:
        """
        Check the parameter contract.

        Raises:
            ValueError: If d, √ρ or t is not positive, both or neither of √ρ and t
                are given, or nmax < 1
        """
        if self.d <= 0:
            raise ValueError(f"d must be positive, got {format_rational(self.d)}")
        if (self.sqrt_rho is None) == (self.t is None):
            raise ValueError("Exactly one of sqrt_rho or t must be given")
        if self.sqrt_rho is not None and self.sqrt_rho <= 0:
            raise ValueError(f"sqrt_rho must be positive, got {format_rational(self.sqrt_rho)}")
        if self.t is not None and self.t.sign() <= 0:
            raise ValueError(f"t must be positive, got {format_quad(self.t)}")
        if self.nmax < 1:
            raise ValueError(f"nmax must be at least 1, got {self.nmax}")

    @property
    def is_quadratic(self) -> bool:
        return self.t is not None

    @property
    def t_param(self) -> TParam:
        if self.t is not None:
            return TParam.quadratic(self.t)
        assert self.sqrt_rho is not None
        return TParam.from_rho_sqrt(self.d, self.sqrt_rho)

    @property
    def sqrt_rho_or_t(self) -> str:
        if self.t is not None:
            return format_quad(self.t)
        return format_rational(self.sqrt_rho) if self.sqrt_rho is not None else ""

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"a": format_rational(self.a), "d": format_rational(self.d)}
        if self.t is not None:
            data["t"] = format_quad(self.t)
        elif self.sqrt_rho is not None:
            data["sqrt_rho"] = format_rational(self.sqrt_rho)
        data["nmax"] = self.nmax
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "StructureParams":
        """
        Rebuild parameters from their JSON form.

        Raises:
            ValueError: If a field is missing or malformed
        """
        try:
            return cls(
                d=parse_rational(data["d"]),
                sqrt_rho=parse_rational(data["sqrt_rho"]) if "sqrt_rho" in data else None,
                t=parse_quad(data["t"]) if "t" in data else None,
                a=parse_rational(data.get("a", "0")),
                nmax=int(data["nmax"]),
            )
        except (AttributeError, KeyError, TypeError) as e:
            raise ValueError(f"Malformed params record: {e}") from e


@dataclass(frozen=True)
class HodgeReport:
    """Result of one h^{0,1} computation."""

    params: StructureParams
    h_prime: int
    h_double_prime: int
    lattice_points: list[LatticePoint]
    stokes_certificates: list[StokesCertificate]

    @property
    def h01(self) -> int:
        return self.h_prime + self.h_double_prime

    @property
    def nmax_used(self) -> int:
        return self.params.nmax

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "params": self.params.to_dict(),
            "h_prime": self.h_prime,
            "h_double_prime": self.h_double_prime,
            "h01": self.h01,
            "lattice_points": [
                {"l": p.l, "m": p.m, "kind": p.kind.value} for p in self.lattice_points
            ],
            "stokes_certificates": [
                {"n": c.n, "u": c.u, "multiplicity": c.multiplicity}
                for c in self.stokes_certificates
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "HodgeReport":
        """
        Rebuild a report from its JSON form.

        Raises:
            ValueError: If the schema version is unsupported, a field is missing,
                or h01 disagrees with h_prime + h_double_prime
        """
        version = data.get("schema_version")
        if version not in SUPPORTED_SCHEMA_VERSIONS:
            raise ValueError(
                f"Unsupported report schema version {version}, expected one of "
                f"{SUPPORTED_SCHEMA_VERSIONS}."
            )
        try:
            report = cls(
                params=StructureParams.from_dict(data["params"]),
                h_prime=int(data["h_prime"]),
                h_double_prime=int(data["h_double_prime"]),
                lattice_points=[
                    LatticePoint(int(p["l"]), int(p["m"]), PointKind(p["kind"]))
                    for p in data["lattice_points"]
                ],
                stokes_certificates=[
                    StokesCertificate(int(c["n"]), int(c["u"]), int(c["multiplicity"]))
                    for c in data["stokes_certificates"]
                ],
            )
        except (AttributeError, KeyError, TypeError) as e:
            raise ValueError(f"Malformed report record: {e}") from e
        if "h01" in data and int(data["h01"]) != report.h01:
            raise ValueError(
                f"Inconsistent report: h01={data['h01']} but h_prime + h_double_prime = "
                f"{report.h01}"
            )
        return report

    def write(self, stream: TextIO) -> None:
        """
        Write the report to a text stream as one JSON document followed by a newline.

        Args:
            stream: Text stream to write to
        """
        json.dump(self.to_dict(), stream, ensure_ascii=False, indent=2)
        stream.write("\n")

    @classmethod
    def read(cls, stream: TextIO) -> "HodgeReport":
        """
        Read a report written by :meth:`write`.

        Raises:
            ValueError: If the stream does not hold a valid report
        """
        try:
            data = json.load(stream)
        except json.JSONDecodeError as e:
            raise ValueError(f"Report is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ValueError("Report must be a JSON object")
        return cls.from_dict(data)

    def to_json(self) -> str:
        stream = io.StringIO()
        self.write(stream)
        return stream.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "HodgeReport":
        return cls.read(io.StringIO(text))

    def csv_row(self) -> dict[str, str]:
        return {
            "d": format_rational(self.params.d),
            "sqrt_rho_or_t": self.params.sqrt_rho_or_t,
            "a": format_rational(self.params.a),
            "nmax": str(self.params.nmax),
            "h_prime": str(self.h_prime),
            "h_double_prime": str(self.h_double_prime),
            "h01": str(self.h01),
            "n_lattice_points": str(len(self.lattice_points)),
            "n_certificates": str(len(self.stokes_certificates)),
            "error": "",
        }

    def to_table(self) -> str:
        """Human-readable summary."""
        mode = "t" if self.params.is_quadratic else "sqrt_rho"
        lines = [
            f"d = {format_rational(self.params.d)}, {mode} = {self.params.sqrt_rho_or_t}, "
            f"a = {format_rational(self.params.a)}, nmax = {self.params.nmax}",
            f"h'   = {self.h_prime}",
            f"h''  = {self.h_double_prime}",
            f"h01  = {self.h01}",
        ]
        for point in self.lattice_points:
            lines.append(f"  lattice point l={point.l} m={point.m} ({point.kind.value})")
        for cert in self.stokes_certificates:
            lines.append(
                f"  stokes certificate n={cert.n} u={cert.u} multiplicity={cert.multiplicity}"
            )
        return "\n".join(lines)

    def __repr__(self) -> str:
        return (
            f"HodgeReport(h_prime={self.h_prime}, h_double_prime={self.h_double_prime}, "
            f"h01={self.h01})"
        )


@dataclass(frozen=True)
class SweepResult:
    """One sweep row: the report, or the error that prevented it."""

    params: StructureParams
    report: HodgeReport | None = None
    error: str | None = None

    def csv_row(self) -> dict[str, str]:
        if self.report is not None:
            return self.report.csv_row()
        row = dict.fromkeys(CSV_COLUMNS, "")
        row.update(
            d=format_rational(self.params.d),
            sqrt_rho_or_t=self.params.sqrt_rho_or_t,
            a=format_rational(self.params.a),
            nmax=str(self.params.nmax),
            error=self.error or "",
        )
        return row
