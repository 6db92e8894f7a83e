"""Tests for the exact Weil-Brezin sector solver."""

import random
import unittest
from fractions import Fraction

import numpy as np
import sympy

from kthodge.numbers import QuadExt
from kthodge.stokes import (
    StokesCertificate,
    TMode,
    TParam,
    WBSector,
    b2b3_closed_form,
    build_ode_system,
    diagonalize,
    h_double_prime,
    l2_solvable,
    rho_sqrt_from_t,
    solvable_t,
)

CERTIFICATE_T = QuadExt(4, 1, 17)


class TestTParam(unittest.TestCase):
    """Test cases for the solvability scalar."""

    def test_from_rho_sqrt(self):
        """Test t = 8d²√ρ·π for rational inputs."""
        t = TParam.from_rho_sqrt(1, 2)
        assert t.mode is TMode.PI_RATIONAL
        assert t.value == 16
        assert str(t) == "16*pi"
        assert t.to_sympy() == 16 * sympy.pi

    def test_quadratic(self):
        """Test quadratic mode formatting and evaluation."""
        t = TParam.quadratic(CERTIFICATE_T)
        assert str(t) == "4 + 1*sqrt(17)"
        assert abs(float(t.evaluate()) - 8.123105625617661) < 1e-12

    def test_rejects_non_positive(self):
        """Test that t ≤ 0 raises ValueError in both modes."""
        with self.assertRaises(ValueError):
            TParam.pi_rational(0)
        with self.assertRaises(ValueError):
            TParam.quadratic(QuadExt(4, -1, 17))

    def test_rejects_wrong_value_type(self):
        """Test that the value must match the mode."""
        with self.assertRaises(ValueError):
            TParam(TMode.QUADRATIC, Fraction(3))

    def test_rho_sqrt_from_t(self):
        """Test √ρ = t/(8πd²)."""
        rho_sqrt = rho_sqrt_from_t(TParam.quadratic(CERTIFICATE_T), 1)
        assert sympy.simplify(rho_sqrt - (4 + sympy.sqrt(17)) / (8 * sympy.pi)) == 0
        assert rho_sqrt_from_t(TParam.from_rho_sqrt(Fraction(3, 2), 5), Fraction(3, 2)) == 5


class TestSectors(unittest.TestCase):
    """Test cases for sector validation."""

    def test_valid_sector(self):
        """Test a valid sector."""
        sector = WBSector(0, 1, -2)
        assert (sector.k, sector.m, sector.n) == (0, 1, -2)

    def test_invalid_sectors(self):
        """Test that n = 0 or m outside [0, |n|) raises ValueError."""
        with self.assertRaises(ValueError):
            WBSector(0, 0, 0)
        with self.assertRaises(ValueError):
            WBSector(0, 2, 2)
        with self.assertRaises(ValueError):
            WBSector(0, -1, 3)


class TestOdeSystem(unittest.TestCase):
    """Test cases for the ODE matrices and their diagonalization."""

    def test_matrices(self):
        """Test A = 2πn[[0, 1/ρ], [1, 0]] and B₂₂ = 4πi at d = 1, k = 0."""
        system = build_ode_system(WBSector(0, 0, 1), 0, 1, 2)
        pi = sympy.pi
        assert system.A == sympy.ImmutableMatrix([[0, pi / 2], [2 * pi, 0]])
        assert sympy.simplify(system.B[1, 1] - 4 * pi * sympy.I) == 0
        assert sympy.simplify(system.B[0, 0]) == 0
        assert sympy.simplify(system.B[0, 1] - sympy.I / 16) == 0

    def test_numeric(self):
        """Test conversion to complex arrays."""
        A, B = build_ode_system(WBSector(1, 0, 1), 0, 1, 2).numeric()
        assert A.shape == (2, 2)
        assert B.dtype == np.complex128
        assert abs(B[0, 0] - 2 * np.pi) < 1e-12

    def test_invalid_parameters(self):
        """Test that non-positive d or √ρ raises ValueError."""
        with self.assertRaises(ValueError):
            build_ode_system(WBSector(0, 0, 1), 0, 0, 1)
        with self.assertRaises(ValueError):
            build_ode_system(WBSector(0, 0, 1), 0, 1, Fraction(-1))

    def test_eigenvalue_order(self):
        """Test λ₁ > 0 > λ₂ for both signs of n."""
        for n in (3, -3):
            system = build_ode_system(WBSector(0, 0, n), 0, 1, 2)
            diag = diagonalize(system, 2)
            assert diag.lambda1 == 3 * sympy.pi
            assert diag.lambda2 == -3 * sympy.pi

    def test_b2b3_matches_closed_form(self):
        """Test b₂b₃ against the closed form on random parameters."""
        rng = random.Random(99)
        for _ in range(6):
            k = rng.randint(-2, 2)
            n = rng.choice([-3, -2, -1, 1, 2, 3])
            m = rng.randint(0, abs(n) - 1)
            a = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            d = Fraction(rng.randint(1, 6), rng.randint(1, 3))
            r = Fraction(rng.randint(1, 6), rng.randint(1, 3))
            diag = diagonalize(build_ode_system(WBSector(k, m, n), a, d, r), r)
            assert sympy.simplify(diag.b2b3 - b2b3_closed_form(k, n, d, r)) == 0

    def test_b2b3_on_certificate(self):
        """Test b₂b₃ = (λ₁ − λ₂)·u for the certificate (n, u) = (1, −1)."""
        rho_sqrt = rho_sqrt_from_t(TParam.quadratic(CERTIFICATE_T), 1)
        diag = diagonalize(build_ode_system(WBSector(0, 0, 1), 0, 1, rho_sqrt), rho_sqrt)
        difference = diag.b2b3 - (diag.lambda1 - diag.lambda2) * (-1)
        assert abs(complex(sympy.N(difference, 40))) < 1e-25


class TestSolvability(unittest.TestCase):
    """Test cases for the L² criterion and h″."""

    def test_certificate(self):
        """Test that t = 4 + √17 certifies (n, u) = (±1, −1)."""
        t = TParam.quadratic(CERTIFICATE_T)
        assert l2_solvable(WBSector(0, 0, 1), t) == StokesCertificate(1, -1)
        assert l2_solvable(WBSector(0, 0, -1), t) == StokesCertificate(-1, -1)
        assert l2_solvable(WBSector(0, 0, 2), t) is None

    def test_nonzero_k_never_solvable(self):
        """Test the imaginary-part obstruction."""
        assert l2_solvable(WBSector(1, 0, 1), TParam.quadratic(CERTIFICATE_T)) is None

    def test_pi_rational_never_solvable(self):
        """Test that transcendental t admits no certificate."""
        assert l2_solvable(WBSector(0, 0, 1), TParam.from_rho_sqrt(1, 2)) is None

    def test_h_double_prime_quadratic(self):
        """Test h″ = 2 with certificates sorted by (|n|, n < 0, u)."""
        count, certificates = h_double_prime(TParam.quadratic(CERTIFICATE_T), 8)
        assert count == 2
        assert certificates == [StokesCertificate(1, -1, 1), StokesCertificate(-1, -1, 1)]

    def test_multiplicity(self):
        """Test that a certificate at |n| credits |n| forms."""
        count, certificates = h_double_prime(TParam.quadratic(solvable_t(2, -1)), 8)
        assert count == 4
        assert certificates == [StokesCertificate(2, -1, 2), StokesCertificate(-2, -1, 2)]

    def test_nmax_bounds_enumeration(self):
        """Test that certificates beyond nmax are not found."""
        assert h_double_prime(TParam.quadratic(solvable_t(3, -2)), 2) == (0, [])

    def test_h_double_prime_vanishes_for_rational_parameters(self):
        """Test h″ = 0 at nmax = 1000 for random rational (d, √ρ)."""
        rng = random.Random(42)
        for _ in range(20):
            d = Fraction(rng.randint(1, 30), rng.randint(1, 7))
            r = Fraction(rng.randint(1, 30), rng.randint(1, 7))
            assert h_double_prime(TParam.from_rho_sqrt(d, r), 1000) == (0, [])

    def test_h_double_prime_requires_positive_nmax(self):
        """Test that nmax < 1 raises ValueError."""
        with self.assertRaises(ValueError):
            h_double_prime(TParam.quadratic(CERTIFICATE_T), 0)

    def test_constructed_instances(self):
        """Test that solvable_t(n, u) always yields the certificate (n, u)."""
        for n in (1, -2, 3, -5):
            for u in (-1, -2, -4):
                t = TParam.quadratic(solvable_t(n, u))
                assert l2_solvable(WBSector(0, 0, n), t) == StokesCertificate(n, u)

    def test_independent_of_m(self):
        """Test that every m ∈ [0, |n|) shares the verdict and b₂b₃ of its n."""
        t = TParam.quadratic(solvable_t(3, -1))
        rho_sqrt = rho_sqrt_from_t(t, 1)
        for n in (3, -3):
            for m in range(abs(n)):
                sector = WBSector(0, m, n)
                assert l2_solvable(sector, t) == StokesCertificate(n, -1)
                diag = diagonalize(build_ode_system(sector, 0, 1, rho_sqrt), rho_sqrt)
                difference = diag.b2b3 - (diag.lambda1 - diag.lambda2) * (-1)
                assert abs(complex(sympy.N(difference, 40))) < 1e-25
            assert l2_solvable(WBSector(1, 1, n), t) is None

    def test_solvable_t_examples(self):
        """Test t = |n|(−4u + √(16u² + 1)) and its contract."""
        assert solvable_t(1, -1) == CERTIFICATE_T
        assert solvable_t(-2, -1) == QuadExt(8, 2, 17)
        with self.assertRaises(ValueError):
            solvable_t(0, -1)
        with self.assertRaises(ValueError):
            solvable_t(1, 0)


if __name__ == "__main__":
    unittest.main()
