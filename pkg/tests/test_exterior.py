"""Tests for the symbolic exterior calculus and the harmonic system derivation."""

import random
import unittest
from fractions import Fraction

import sympy

from kthodge.exterior import (
    PHI1,
    PHI2,
    PHIBAR1,
    PHIBAR2,
    V1,
    V2,
    Equation,
    Form,
    KTStructure,
    RealFrameForm,
    Vb1,
    Vb2,
    a,
    almost_complex_structure,
    apply_vector,
    b,
    check_almost_kahler,
    check_coframe_type,
    check_identities,
    check_j_squared,
    conjugate,
    conjugate_scalar,
    dbar,
    derive_harmonic_system,
    expected_harmonic_system,
    exterior_d,
    f,
    fbar,
    format_scalar,
    g,
    harmonic_form,
    hodge_star,
    kahler_form,
    normalize_word,
    partial,
    rho,
    standard_structure,
    star_side_terms,
    star_table,
    to_phi_basis,
    to_real_frame,
    volume_form,
    wedge,
)
from kthodge.numbers import GaussianRational


def _random_coefficient(rng):
    return GaussianRational(
        Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
        Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
    ).to_sympy()


def _random_form(rng, degree=None):
    """A form with up to four terms; words are shuffled so sorting signs are exercised."""
    terms = {}
    for _ in range(rng.randint(1, 4)):
        size = rng.randint(0, 4) if degree is None else degree
        word = rng.sample(range(4), size)
        terms[tuple(word)] = _random_coefficient(rng)
    return Form(terms)


class TestWords(unittest.TestCase):
    """Test cases for wedge words and formal derivatives."""

    def test_normalize_word(self):
        """Test sorting signs and repeated generators."""
        assert normalize_word((1, 0)) == (-1, (0, 1))
        assert normalize_word((2, 0, 1)) == (1, (0, 1, 2))
        assert normalize_word((3, 3)) == (0, ())

    def test_normalize_word_out_of_range(self):
        """Test that unknown generators raise ValueError."""
        with self.assertRaises(ValueError):
            normalize_word((0, 4))

    def test_apply_vector(self):
        """Test that frame fields kill constants and act linearly on unknowns."""
        assert apply_vector(V1, 3 * b) == 0
        assert apply_vector(V1, b * f + g) == b * V1(f) + V1(g)
        assert apply_vector(V2, Vb1(g)) == V2(Vb1(g))

    def test_apply_vector_nonlinear(self):
        """Test that products of unknowns are rejected."""
        with self.assertRaises(ValueError):
            apply_vector(V1, f * g)

    def test_conjugate_scalar(self):
        """Test conjugation of derivatives, unknowns and i."""
        assert conjugate_scalar(sympy.I * V1(f)) == -sympy.I * Vb1(fbar)
        assert conjugate_scalar(conjugate_scalar(a * V2(g) + sympy.I)) == sympy.expand(
            a * V2(g) + sympy.I
        )


class TestForms(unittest.TestCase):
    """Test cases for the Form algebra."""

    def test_antisymmetry(self):
        """Test that unsorted words absorb their sign."""
        form = Form({(1, 0): 2})
        assert form.coefficient((0, 1)) == -2
        assert form.coefficient((1, 0)) == 2
        assert Form.generator(PHI1).wedge(Form.generator(PHI1)).is_zero()

    def test_graded_commutativity(self):
        """Test α∧β = (−1)^{pq} β∧α."""
        alpha = Form({(0,): f, (2,): 1})
        beta = Form({(1, 3): g})
        assert alpha.wedge(beta) == beta.wedge(alpha)
        gamma = Form({(3,): b})
        assert alpha.wedge(gamma) == -gamma.wedge(alpha)

    def test_bidegree(self):
        """Test bidegree bookkeeping."""
        assert Form.word_bidegree((0, 2, 3)) == (1, 2)
        assert harmonic_form().bidegrees() == {(0, 1)}
        assert not Form({(0,): 1, (2,): 1}).is_homogeneous()

    def test_frames_do_not_mix(self):
        """Test that φ-forms and real-frame forms cannot be added."""
        with self.assertRaises(TypeError):
            Form.generator(0) + RealFrameForm.generator(0)

    def test_conjugate_involution(self):
        """Test that conjugating a form twice is the identity."""
        form = Form({(0, 3): sympy.I * a * f, (1,): V2(g)})
        assert conjugate(conjugate(form)) == form

    def test_frame_change_round_trip(self):
        """Test that the φ-coframe and the real coframe are inverse bases."""
        for index in range(4):
            generator = Form.generator(index)
            assert to_phi_basis(to_real_frame(generator)) == generator
        assert to_real_frame(Form.generator(PHI1)) == RealFrameForm({(0,): 1, (1,): sympy.I})

    def test_labels(self):
        """Test monomial labels."""
        assert str(Form.monomial((1, 2, 3), rho)) == "ρφ^{21̄2̄}"
        assert str(Form.monomial((0, 2, 3), -1)) == "−φ^{11̄2̄}"
        assert str(Form()) == "0"


class TestWedgeProperties(unittest.TestCase):
    """Property tests on seeded random forms with Gaussian-rational coefficients."""

    def test_associativity(self):
        """Test (α∧β)∧γ = α∧(β∧γ)."""
        rng = random.Random(31)
        for _ in range(40):
            alpha, beta, gamma = (_random_form(rng) for _ in range(3))
            assert wedge(wedge(alpha, beta), gamma) == wedge(alpha, wedge(beta, gamma))

    def test_conjugate_of_wedge(self):
        """Test that conjugation is multiplicative over the wedge product."""
        rng = random.Random(37)
        for _ in range(40):
            alpha, beta = _random_form(rng), _random_form(rng)
            assert conjugate(wedge(alpha, beta)) == wedge(conjugate(alpha), conjugate(beta))
            assert conjugate(conjugate(alpha)) == alpha

    def test_graded_commutativity(self):
        """Test α∧β = (−1)^{pq} β∧α on homogeneous random forms."""
        rng = random.Random(41)
        for _ in range(40):
            p, q = rng.randint(0, 4), rng.randint(0, 4)
            alpha, beta = _random_form(rng, p), _random_form(rng, q)
            assert wedge(alpha, beta) == (-1) ** (p * q) * wedge(beta, alpha)

    def test_distributivity(self):
        """Test α∧(β + γ) = α∧β + α∧γ."""
        rng = random.Random(43)
        for _ in range(40):
            alpha, beta, gamma = (_random_form(rng) for _ in range(3))
            assert wedge(alpha, beta + gamma) == wedge(alpha, beta) + wedge(alpha, gamma)


class TestStructure(unittest.TestCase):
    """Test cases for the structure equations."""

    def test_generator_differentials(self):
        """Test dφ¹ = 0 and dφ² = (b/4)(φ^{12} + φ^{12̄} + φ^{21̄} − φ^{1̄2̄})."""
        structure = standard_structure()
        quarter = b / 4
        assert structure.differential(PHI1).is_zero()
        assert structure.differential(PHIBAR1).is_zero()
        assert structure.differential(PHI2) == Form(
            {(0, 1): quarter, (0, 3): quarter, (1, 2): quarter, (2, 3): -quarter}
        )
        assert structure.differential(PHIBAR2) == conjugate(structure.differential(PHI2))

    def test_d_squared_on_constant_forms(self):
        """Test d∘d = 0 on every coframe monomial."""
        for word in star_table():
            assert exterior_d(exterior_d(Form.monomial(word))).is_zero()

    def test_scalar_differential(self):
        """Test df = V₁(f)φ¹ + V₂(f)φ² + V̄₁(f)φ̄¹ + V̄₂(f)φ̄²."""
        assert exterior_d(Form.scalar(f)) == Form(
            {(0,): V1(f), (1,): V2(f), (2,): Vb1(f), (3,): Vb2(f)}
        )

    def test_real_frame_derivative(self):
        """Test de⁴ = −e²∧e³ and the constant-coefficient contract."""
        assert exterior_d(RealFrameForm.generator(3)) == RealFrameForm({(1, 2): -1})
        with self.assertRaises(ValueError):
            exterior_d(RealFrameForm({(0,): f}))

    def test_dbar_and_partial_split_d(self):
        """Test that ∂ + ∂̄ = d on a (0,1)-form for this structure."""
        s = harmonic_form()
        total = exterior_d(s)
        split = dbar(s) + partial(s)
        assert split.bidegrees() <= {(1, 1), (0, 2)}
        remainder = total - split
        assert remainder.bidegrees() <= {(2, 0)} or remainder.is_zero()


class TestAlmostKahler(unittest.TestCase):
    """Test cases for J, ω and the closedness of ω."""

    def test_j_squared(self):
        """Test J² = −1 symbolically and numerically."""
        assert check_j_squared()
        assert check_j_squared(sympy.Rational(7, 2), 8 * sympy.pi)

    def test_j_requires_nonzero_b(self):
        """Test that b = 0 is rejected."""
        with self.assertRaises(ValueError):
            almost_complex_structure(1, 0)

    def test_coframe_type(self):
        """Test that φ¹, φ² are (1,0) and their conjugates (0,1)."""
        assert check_coframe_type()

    def test_kahler_form_in_real_frame(self):
        """Test ω = 4e²∧e¹ + 4bρ e³∧e⁴."""
        assert to_real_frame(kahler_form()) == RealFrameForm({(1, 0): 4, (2, 3): 4 * b * rho})

    def test_omega_closed(self):
        """Test dω = 0 for the standard structure and every sampled ρ."""
        assert check_almost_kahler()
        assert check_almost_kahler(rho_value=sympy.Rational(9, 4))

    def test_broken_structure_is_not_almost_kahler(self):
        """Test that doubling the φ^{21̄} term of dφ² breaks dω = 0."""
        structure = standard_structure()
        dphi2 = structure.differential(PHI2)
        broken = structure.with_differential(PHI2, dphi2 + Form.monomial((1, 2), b / 4))
        assert broken.differential(PHIBAR2) == conjugate(broken.differential(PHI2))
        assert not check_almost_kahler(broken)

    def test_invisible_modification_keeps_omega_closed(self):
        """Test that doubling the φ^{12̄} term is invisible to dω."""
        structure = KTStructure.standard()
        dphi2 = structure.differential(PHI2)
        modified = structure.with_differential(PHI2, dphi2 + Form.monomial((0, 3), b / 4))
        assert check_almost_kahler(modified)


class TestHodgeStar(unittest.TestCase):
    """Test cases for the Hodge star."""

    def test_star_of_barred_generators(self):
        """Test *φ̄¹ = ρφ^{21̄2̄} and *φ̄² = −φ^{11̄2̄}."""
        assert hodge_star(Form.generator(PHIBAR1)) == Form.monomial((PHI2, PHIBAR1, PHIBAR2), rho)
        assert hodge_star(Form.generator(PHIBAR2)) == Form.monomial((PHI1, PHIBAR1, PHIBAR2), -1)

    def test_star_of_one_is_volume(self):
        """Test *1 = vol."""
        assert hodge_star(Form.scalar(1)) == volume_form()

    def test_table_has_sixteen_entries(self):
        """Test that the star table covers the whole exterior algebra."""
        table = star_table()
        assert len(table) == 16
        assert all(len(word) + len(next(iter(image.terms))) == 4 for word, image in table.items())

    def test_double_star(self):
        """Test ** = (−1)^{k(4−k)} on every monomial."""
        for word in star_table():
            k = len(word)
            twice = hodge_star(hodge_star(Form.monomial(word)))
            assert twice == Form.monomial(word) * (-1) ** (k * (4 - k))

    def test_star_requires_homogeneous_input(self):
        """Test that mixed bidegrees raise ValueError."""
        with self.assertRaises(ValueError):
            hodge_star(Form({(PHI1,): 1, (PHIBAR1,): 1}))

    def test_star_is_linear_in_coefficients(self):
        """Test *(fφ̄¹ + gφ̄²) = fρφ^{21̄2̄} − gφ^{11̄2̄}."""
        assert hodge_star(harmonic_form()) == Form({(1, 2, 3): rho * f, (0, 2, 3): -g})


class TestHarmonicSystem(unittest.TestCase):
    """Test cases for the derived equations."""

    def test_derivation_matches_expected(self):
        """Test that both equations are reproduced."""
        assert derive_harmonic_system() == expected_harmonic_system()

    def test_canonical_text(self):
        """Test the printed form of both equations."""
        first, second = derive_harmonic_system()
        assert str(first) == "−V̄₂(f) + V̄₁(g) + (b/4)g = 0"
        assert str(second) == "ρV₁(f) + V₂(g) = 0"

    def test_equation_equality_is_by_expansion(self):
        """Test that equal expressions written differently compare equal."""
        assert Equation(b * (f + g) / 4) == Equation(b * f / 4 + b * g / 4)
        assert Equation(f) != Equation(g)

    def test_f_terms_cancel(self):
        """Test that the two f·bρ/4 contributions of ∂(*s) have opposite signs."""
        coefficients = [sympy.expand(c) for _, c in star_side_terms()]
        assert sympy.expand(b * rho * f / 4) in coefficients
        assert sympy.expand(-b * rho * f / 4) in coefficients
        assert sympy.expand(sum(coefficients)) == sympy.expand(rho * V1(f) + V2(g))

    def test_leibniz_descriptions(self):
        """Test that every kept term names its source."""
        descriptions = [term.describe() for term, _ in star_side_terms()]
        assert any(d.startswith("d(coeff)") for d in descriptions)
        assert any(d.startswith("d(φ²)") or d.startswith("d(φ̄²)") for d in descriptions)

    def test_format_scalar_ordering(self):
        """Test grouping by unknown and derivative order."""
        expr = g * b + V1(f) * rho + Vb2(Vb1(f)) - 3
        assert format_scalar(expr) == "V̄₂(V̄₁(f)) + ρV₁(f) + bg − 3"


class TestIdentityChecks(unittest.TestCase):
    """Test cases for the full identity list."""

    def test_all_identities_pass(self):
        """Test that every structural identity holds."""
        checks = check_identities()
        failed = [str(check) for check in checks if not check.passed]
        assert failed == []

    def test_identity_names(self):
        """Test the names printed by derive --check-all."""
        names = [str(check) for check in check_identities()]
        assert "dω = 0 PASS" in names
        assert "*φ̄² = −φ^{11̄2̄} PASS" in names
        assert "*φ̄¹ = ρφ^{21̄2̄} PASS" in names
        assert "d∘d = 0 PASS" in names

    def test_broken_structure_fails_checks(self):
        """Test that a broken structure is reported as such."""
        structure = standard_structure()
        broken = structure.with_differential(
            PHI2, structure.differential(PHI2) + Form.monomial((1, 2), b / 4)
        )
        failing = {check.name for check in check_identities(broken) if not check.passed}
        assert "dω = 0" in failing


if __name__ == "__main__":
    unittest.main()
