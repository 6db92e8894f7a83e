"""Tests for structure parameters and the HodgeReport codec."""

import io
import json
import unittest
from fractions import Fraction

from kthodge.hodge import compute_h01
from kthodge.numbers import QuadExt
from kthodge.report import (
    CSV_COLUMNS,
    SCHEMA_VERSION,
    HodgeReport,
    StructureParams,
    SweepResult,
)


class TestStructureParams(unittest.TestCase):
    """Test cases for StructureParams."""

    def test_validate_accepts_valid_params(self):
        """Test that valid parameters pass validation."""
        StructureParams(d=Fraction(1), sqrt_rho=Fraction(2), nmax=8).validate()
        StructureParams(d=Fraction(1), t=QuadExt(4, 1, 17), nmax=8).validate()

    def test_validate_rejects_invalid_params(self):
        """Test every rejected combination."""
        invalid = [
            StructureParams(d=Fraction(0), sqrt_rho=Fraction(2), nmax=8),
            StructureParams(d=Fraction(1), nmax=8),
            StructureParams(d=Fraction(1), sqrt_rho=Fraction(2), t=QuadExt(9), nmax=8),
            StructureParams(d=Fraction(1), sqrt_rho=Fraction(-2), nmax=8),
            StructureParams(d=Fraction(1), t=QuadExt(4, -1, 17), nmax=8),
            StructureParams(d=Fraction(1), sqrt_rho=Fraction(2), nmax=0),
        ]
        for params in invalid:
            with self.assertRaises(ValueError):
                params.validate()

    def test_t_param(self):
        """Test that rational parameters route to pi_rational t = 8d²√ρ·π."""
        params = StructureParams(d=Fraction(1, 2), sqrt_rho=Fraction(3), nmax=8)
        assert str(params.t_param) == "6*pi"
        assert not params.is_quadratic

    def test_dict_round_trip(self):
        """Test that parameters survive their JSON form."""
        params = StructureParams(
            d=Fraction(5, 2), t=QuadExt(Fraction(1, 3), 2, 7), a=Fraction(-7, 2), nmax=12
        )
        data = params.to_dict()
        assert data == {"a": "-7/2", "d": "5/2", "t": "1/3 + 2*sqrt(7)", "nmax": 12}
        assert StructureParams.from_dict(data) == params

    def test_from_dict_missing_field(self):
        """Test that a missing field raises ValueError."""
        with self.assertRaises(ValueError):
            StructureParams.from_dict({"d": "1", "sqrt_rho": "2"})

    def test_from_dict_non_string_fields(self):
        """Test that exact fields stored as JSON numbers or lists raise ValueError."""
        for data in [
            {"a": "0", "d": 1, "sqrt_rho": "2", "nmax": 8},
            {"a": "0", "d": "1", "sqrt_rho": 2.5, "nmax": 8},
            {"a": 0, "d": "1", "t": "4 + 1*sqrt(17)", "nmax": 8},
            {"a": "0", "d": "1", "t": ["4", "1", "17"], "nmax": 8},
        ]:
            with self.assertRaises(ValueError):
                StructureParams.from_dict(data)
        with self.assertRaises(ValueError):
            StructureParams.from_dict(["d", "1"])


class TestHodgeReport(unittest.TestCase):
    """Test cases for HodgeReport serialization."""

    def setUp(self):
        self.rational = compute_h01(StructureParams(d=Fraction(1), sqrt_rho=Fraction(2), nmax=8))
        self.quadratic = compute_h01(StructureParams(d=Fraction(1), t=QuadExt(4, 1, 17), nmax=8))

    def test_h01_is_sum(self):
        """Test h01 = h′ + h″."""
        assert self.rational.h01 == 4
        assert self.quadratic.h01 == self.quadratic.h_prime + self.quadratic.h_double_prime
        assert self.quadratic.nmax_used == 8

    def test_json_schema(self):
        """Test the JSON field layout."""
        data = json.loads(self.rational.to_json())
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["params"] == {"a": "0", "d": "1", "sqrt_rho": "2", "nmax": 8}
        assert data["h01"] == 4
        assert data["lattice_points"][0] == {"l": 0, "m": 0, "kind": "origin"}
        assert data["stokes_certificates"] == []

    def test_round_trip(self):
        """Test that write followed by read returns an equal report."""
        for report in (self.rational, self.quadratic):
            stream = io.StringIO()
            report.write(stream)
            stream.seek(0)
            assert HodgeReport.read(stream) == report

    def test_unsupported_schema_version(self):
        """Test that unknown schema versions are rejected."""
        data = self.rational.to_dict()
        data["schema_version"] = SCHEMA_VERSION + 1
        with self.assertRaises(ValueError):
            HodgeReport.from_dict(data)

    def test_inconsistent_h01(self):
        """Test that an h01 field disagreeing with its parts is rejected."""
        data = self.rational.to_dict()
        data["h01"] = 5
        with self.assertRaises(ValueError):
            HodgeReport.from_dict(data)

    def test_invalid_json(self):
        """Test that non-JSON input raises ValueError."""
        with self.assertRaises(ValueError):
            HodgeReport.from_json("{not json")
        with self.assertRaises(ValueError):
            HodgeReport.from_json("[1, 2]")

    def test_numeric_exact_fields(self):
        """Test that a report whose params hold numbers instead of strings raises ValueError."""
        data = self.rational.to_dict()
        data["params"]["d"] = 1
        with self.assertRaises(ValueError):
            HodgeReport.from_json(json.dumps(data))
        data = self.quadratic.to_dict()
        data["params"]["t"] = 8.123105625617661
        with self.assertRaises(ValueError):
            HodgeReport.from_json(json.dumps(data))
        data = self.rational.to_dict()
        data["params"] = "d=1"
        with self.assertRaises(ValueError):
            HodgeReport.from_dict(data)

    def test_csv_row_matches_json(self):
        """Test that CSV and JSON carry identical numeric content."""
        row = self.quadratic.csv_row()
        data = self.quadratic.to_dict()
        assert list(row) == CSV_COLUMNS
        assert row["h_prime"] == str(data["h_prime"])
        assert row["h_double_prime"] == str(data["h_double_prime"])
        assert row["h01"] == str(data["h01"])
        assert row["sqrt_rho_or_t"] == data["params"]["t"]
        assert row["n_certificates"] == str(len(data["stokes_certificates"]))

    def test_table(self):
        """Test the human-readable summary."""
        table = self.quadratic.to_table()
        assert "h01  = 4" in table
        assert "stokes certificate n=1 u=-1 multiplicity=1" in table
        assert "stokes certificate n=-1 u=-1 multiplicity=1" in table

    def test_repr(self):
        """Test the short representation."""
        assert repr(self.rational) == "HodgeReport(h_prime=4, h_double_prime=0, h01=4)"


class TestSweepResult(unittest.TestCase):
    """Test cases for SweepResult rows."""

    def test_error_row(self):
        """Test that a failed row keeps its parameters and error."""
        params = StructureParams(d=Fraction(0), sqrt_rho=Fraction(1), nmax=8)
        row = SweepResult(params, error="d must be positive, got 0").csv_row()
        assert list(row) == CSV_COLUMNS
        assert row["d"] == "0"
        assert row["h01"] == ""
        assert row["error"] == "d must be positive, got 0"


if __name__ == "__main__":
    unittest.main()
