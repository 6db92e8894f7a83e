"""Symbolic exterior calculus on the left-invariant coframe of the Kodaira-Thurston manifold."""

from __future__ import annotations

import re
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Any, ClassVar, TypeVar

import sympy
from sympy.core.function import AppliedUndef

# Structure parameters. b ≠ 0 and ρ > 0 for every structure in the family.
a = sympy.Symbol("a", real=True)
b = sympy.Symbol("b", real=True, nonzero=True)
rho = sympy.Symbol("ρ", positive=True)

# Formal unknowns of a (0,1)-form s = f·φ̄¹ + g·φ̄² and their conjugates.
f, g = sympy.symbols("f g")
fbar, gbar = sympy.symbols("f̄ ḡ")
FUNCTION_SYMBOLS = (f, g, fbar, gbar)
_CONJUGATE_SYMBOL = {f: fbar, fbar: f, g: gbar, gbar: g}

# The frame dual to (φ¹, φ², φ̄¹, φ̄²), acting as formal derivatives.
V1 = sympy.Function("V₁")
V2 = sympy.Function("V₂")
Vb1 = sympy.Function("V̄₁")
Vb2 = sympy.Function("V̄₂")
VECTOR_FIELDS = (V1, V2, Vb1, Vb2)
_CONJUGATE_FIELD = {V1: Vb1, Vb1: V1, V2: Vb2, Vb2: V2}

# Generator indices: φ¹ = 0, φ² = 1, φ̄¹ = 2, φ̄² = 3.
PHI1, PHI2, PHIBAR1, PHIBAR2 = range(4)
DIMENSION = 4

ScalarLike = sympy.Expr | int | complex
Word = tuple[int, ...]

_I_PATTERN = re.compile(r"\bI\b")


def conjugate_index(index: int) -> int:
    """Index of the complex conjugate generator (φ¹ ↔ φ̄¹, φ² ↔ φ̄²)."""
    return (index + 2) % DIMENSION


def normalize_word(word: Sequence[int]) -> tuple[int, Word]:
    """
    Sort a wedge word into strictly increasing order.

    Args:
        word: Generator indices in wedge order

    Returns:
        (sign, sorted word); sign is 0 when an index repeats

    Raises:
        ValueError: If an index is outside 0..3
    """
    for index in word:
        if not 0 <= index < DIMENSION:
            raise ValueError(f"Generator index {index} is outside 0..{DIMENSION - 1}")
    if len(set(word)) != len(word):
        return 0, ()
    inversions = sum(
        1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j]
    )
    return (-1) ** inversions, tuple(sorted(word))


def is_function_atom(expr: sympy.Expr) -> bool:
    """True for f, g, their conjugates, and formal derivative words applied to them."""
    if expr in FUNCTION_SYMBOLS:
        return True
    if isinstance(expr, AppliedUndef) and expr.func in _CONJUGATE_FIELD and len(expr.args) == 1:
        return is_function_atom(expr.args[0])
    return False


def split_term(term: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    """
    Split a monomial into (constant coefficient, function atom or 1).

    Raises:
        ValueError: If the term is not linear in the formal unknowns
    """
    coeff, dependent = term.as_independent(*FUNCTION_SYMBOLS, as_Add=False)
    if dependent != 1 and not is_function_atom(dependent):
        raise ValueError(f"Term '{term}' is not linear in the formal unknowns")
    return coeff, dependent


def apply_vector(field: sympy.FunctionClass, expr: ScalarLike) -> sympy.Expr:
    """
    Apply a frame vector field as a formal derivative.

    Constants are annihilated; on function atoms the derivative word is
    extended on the left. Derivatives are never reordered.

    Raises:
        ValueError: If a term is not linear in the formal unknowns
    """
    expanded = sympy.expand(sympy.sympify(expr))
    result = sympy.Integer(0)
    for term in sympy.Add.make_args(expanded):
        coeff, dependent = split_term(term)
        if dependent != 1:
            result += coeff * field(dependent)
    return sympy.expand(result)


def conjugate_scalar(expr: ScalarLike) -> sympy.Expr:
    """Complex conjugate: V_i ↔ V̄_i, f ↔ f̄, g ↔ ḡ and i → −i. a, b, ρ are real."""
    expr = sympy.sympify(expr)
    swapped = expr.replace(
        lambda e: isinstance(e, AppliedUndef) and e.func in _CONJUGATE_FIELD,
        lambda e: _CONJUGATE_FIELD[e.func](*e.args),
    )
    return sympy.expand(swapped.xreplace({sympy.I: -sympy.I, **_CONJUGATE_SYMBOL}))


def _format_coefficient(coeff: sympy.Expr, label: str) -> str:
    text = _I_PATTERN.sub("i", sympy.sstr(coeff))
    if coeff == 1:
        return label or "1"
    if not label:
        return text
    if coeff.is_Symbol:
        return f"{text}{label}"
    return f"({text}){label}"


def format_linear_combination(pairs: Sequence[tuple[sympy.Expr, str]]) -> str:
    """
    Print Σ coeff·label with Unicode minus signs.

    Unit coefficients print as their sign, plain symbols are juxtaposed and
    any other coefficient is parenthesized.
    """
    if not pairs:
        return "0"
    pieces = []
    for position, (coeff, label) in enumerate(pairs):
        negative = coeff.could_extract_minus_sign()
        body = _format_coefficient(-coeff if negative else coeff, label)
        if position == 0:
            pieces.append(f"−{body}" if negative else body)
        else:
            pieces.append(f" − {body}" if negative else f" + {body}")
    return "".join(pieces)


def _atom_sort_key(atom: sympy.Expr) -> tuple[int, int, tuple[int, ...]]:
    word: list[int] = []
    while isinstance(atom, AppliedUndef):
        word.append(VECTOR_FIELDS.index(atom.func))
        atom = atom.args[0]
    return FUNCTION_SYMBOLS.index(atom), -len(word), tuple(word)


def format_scalar(expr: ScalarLike) -> str:
    """
    Print a scalar expression grouped by function atom.

    Terms are ordered by unknown (f, g, f̄, ḡ), then by derivative order
    (highest first), then by derivative word. Function-free terms come last.
    """
    expanded = sympy.expand(sympy.sympify(expr))
    grouped: dict[sympy.Expr, sympy.Expr] = {}
    for term in sympy.Add.make_args(expanded):
        if term == 0:
            continue
        coeff, dependent = split_term(term)
        grouped[dependent] = grouped.get(dependent, sympy.Integer(0)) + coeff
    atoms = sorted((atom for atom in grouped if atom != 1), key=_atom_sort_key)
    pairs = [(sympy.factor_terms(grouped[atom]), sympy.sstr(atom)) for atom in atoms]
    if 1 in grouped:
        pairs.append((grouped[1], ""))
    return format_linear_combination([(c, label) for c, label in pairs if c != 0])


FormT = TypeVar("FormT", bound="_AlternatingForm")


class _AlternatingForm:
    """Element of the exterior algebra on four generators with symbolic coefficients."""

    LABELS: ClassVar[tuple[str, ...]]
    SINGLE_LABELS: ClassVar[tuple[str, ...]]
    SYMBOL: ClassVar[str]

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[int], ScalarLike] | None = None):
        """
        Build a form from a mapping of wedge words to coefficients.

        Words may be unsorted; antisymmetry signs are absorbed into the
        coefficients and zero coefficients are dropped.

        Args:
            terms: Mapping from generator index words to scalar coefficients
        """
        accumulated: dict[Word, sympy.Expr] = {}
        for word, coeff in (terms or {}).items():
            sign, key = normalize_word(tuple(word))
            if sign == 0:
                continue
            accumulated[key] = accumulated.get(key, sympy.Integer(0)) + sign * sympy.sympify(coeff)
        self._terms: dict[Word, sympy.Expr] = {}
        for key, value in accumulated.items():
            value = sympy.expand(value)
            if value != 0:
                self._terms[key] = value

    @classmethod
    def generator(cls: type[FormT], index: int) -> FormT:
        return cls({(index,): 1})

    @classmethod
    def monomial(cls: type[FormT], word: Sequence[int], coeff: ScalarLike = 1) -> FormT:
        return cls({tuple(word): coeff})

    @classmethod
    def scalar(cls: type[FormT], value: ScalarLike) -> FormT:
        return cls({(): value})

    @property
    def terms(self) -> Mapping[Word, sympy.Expr]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Word, sympy.Expr]]:
        yield from sorted(self._terms.items(), key=lambda item: (len(item[0]), item[0]))

    def coefficient(self, word: Sequence[int]) -> sympy.Expr:
        """Coefficient of the given monomial, with the sign of sorting applied."""
        sign, key = normalize_word(tuple(word))
        return sign * self._terms.get(key, sympy.Integer(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {len(word) for word in self._terms}

    def map_coefficients(self: FormT, fn: Callable[[sympy.Expr], ScalarLike]) -> FormT:
        return type(self)({word: fn(coeff) for word, coeff in self._terms.items()})

    def _check_same(self, other: Any) -> None:
        if type(other) is not type(self):
            raise TypeError(
                f"Cannot combine {type(self).__name__} with {type(other).__name__}; "
                "convert between frames explicitly"
            )

    def __add__(self: FormT, other: FormT) -> FormT:
        self._check_same(other)
        merged: dict[Word, sympy.Expr] = dict(self._terms)
        for word, coeff in other._terms.items():
            merged[word] = merged.get(word, sympy.Integer(0)) + coeff
        return type(self)(merged)

    def __neg__(self: FormT) -> FormT:
        return self.map_coefficients(lambda c: -c)

    def __sub__(self: FormT, other: FormT) -> FormT:
        return self + (-other)

    def __mul__(self: FormT, scalar: ScalarLike) -> FormT:
        if isinstance(scalar, _AlternatingForm):
            raise TypeError("Use wedge() to multiply two forms")
        factor = sympy.sympify(scalar)
        return self.map_coefficients(lambda c: c * factor)

    __rmul__ = __mul__

    def wedge(self: FormT, other: FormT) -> FormT:
        self._check_same(other)
        product: dict[Word, sympy.Expr] = {}
        for left_word, left in self._terms.items():
            for right_word, right in other._terms.items():
                sign, key = normalize_word(left_word + right_word)
                if sign == 0:
                    continue
                product[key] = product.get(key, sympy.Integer(0)) + sign * left * right
        return type(self)(product)

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        words = set(self._terms) | set(other._terms)
        return all(
            sympy.expand(self.coefficient(w) - other.coefficient(w)) == 0 for w in words
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, frozenset(self._terms.items())))

    @classmethod
    def word_label(cls, word: Word) -> str:
        if not word:
            return ""
        if len(word) == 1:
            return cls.SINGLE_LABELS[word[0]]
        return f"{cls.SYMBOL}^{{{''.join(cls.LABELS[i] for i in word)}}}"

    def __str__(self) -> str:
        return format_linear_combination(
            [(coeff, self.word_label(word)) for word, coeff in self.items()]
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class Form(_AlternatingForm):
    """A complex form on the coframe (φ¹, φ², φ̄¹, φ̄²), graded by bidegree."""

    LABELS = ("1", "2", "1̄", "2̄")
    SINGLE_LABELS = ("φ¹", "φ²", "φ̄¹", "φ̄²")
    SYMBOL = "φ"

    __slots__ = ()

    @staticmethod
    def word_bidegree(word: Word) -> tuple[int, int]:
        barred = sum(1 for index in word if index >= 2)
        return len(word) - barred, barred

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.word_bidegree(word) for word in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1


class RealFrameForm(_AlternatingForm):
    """A form on the real coframe (e¹, e², e³, e⁴)."""

    LABELS = ("1", "2", "3", "4")
    SINGLE_LABELS = ("e¹", "e²", "e³", "e⁴")
    SYMBOL = "e"

    __slots__ = ()


def wedge(alpha: FormT, beta: FormT) -> FormT:
    """Exterior product; bilinear, associative and graded-commutative."""
    return alpha.wedge(beta)


def conjugate(alpha: Form) -> Form:
    """Complex conjugate of a form: generators and coefficients are both conjugated."""
    return Form(
        {
            tuple(conjugate_index(i) for i in word): conjugate_scalar(coeff)
            for word, coeff in alpha.terms.items()
        }
    )


def _phi_in_real_frame() -> tuple[RealFrameForm, ...]:
    e = [RealFrameForm.generator(i) for i in range(DIMENSION)]
    i = sympy.I
    return (
        e[0] + e[1] * i,
        e[2] * (1 - a * i) - e[3] * (i * b),
        e[0] - e[1] * i,
        e[2] * (1 + a * i) + e[3] * (i * b),
    )


def _real_frame_in_phi() -> tuple[Form, ...]:
    phi = [Form.generator(i) for i in range(DIMENSION)]
    i = sympy.I
    half = sympy.Rational(1, 2)
    return (
        (phi[PHI1] + phi[PHIBAR1]) * half,
        (phi[PHI1] - phi[PHIBAR1]) * (-i / 2),
        (phi[PHI2] + phi[PHIBAR2]) * half,
        (phi[PHI2] - phi[PHIBAR2]) * (i / (2 * b)) - (phi[PHI2] + phi[PHIBAR2]) * (a / (2 * b)),
    )


def _change_basis(
    alpha: _AlternatingForm, images: Sequence[FormT], target: type[FormT]
) -> FormT:
    result = target()
    for word, coeff in alpha.terms.items():
        product = target.scalar(coeff)
        for index in word:
            product = product.wedge(images[index])
        result = result + product
    return result


def to_real_frame(alpha: Form) -> RealFrameForm:
    """Rewrite a φ-form in the real coframe: φ¹ = e¹ + ie², φ² = (1−ai)e³ − ibe⁴."""
    return _change_basis(alpha, _phi_in_real_frame(), RealFrameForm)


def to_phi_basis(alpha: RealFrameForm) -> Form:
    """Rewrite a real-frame form in the φ-coframe; inverse of :func:`to_real_frame`."""
    return _change_basis(alpha, _real_frame_in_phi(), Form)


# de¹ = de² = de³ = 0, de⁴ = −e²∧e³
REAL_STRUCTURE_EQUATIONS = (
    RealFrameForm(),
    RealFrameForm(),
    RealFrameForm(),
    RealFrameForm({(1, 2): -1}),
)


@dataclass(frozen=True)
class LeibnizTerm:
    """One summand of d(c·φ^w): either dc∧φ^w or the derivative of one generator."""

    source: Word
    position: int | None
    form: Form

    def describe(self) -> str:
        mono = Form.word_label(self.source) or "1"
        if self.position is None:
            return f"d(coeff)∧{mono}"
        return f"d({Form.SINGLE_LABELS[self.source[self.position]]}) in {mono}"


@dataclass(frozen=True)
class KTStructure:
    """
    Generator differentials (dφ¹, dφ², dφ̄¹, dφ̄²) of an invariant coframe.

    The standard structure is derived from the real structure equations;
    modified structures feed negative tests of the closedness of ω.
    """

    differentials: tuple[Form, Form, Form, Form]

    @classmethod
    def standard(cls) -> KTStructure:
        return standard_structure()

    def differential(self, index: int) -> Form:
        return self.differentials[index]

    def with_differential(self, index: int, form: Form) -> KTStructure:
        """
        Replace one generator differential, updating its conjugate to match.

        Args:
            index: Generator index 0..3
            form: New value of dφ^index

        Returns:
            A new structure; this one is unchanged
        """
        updated = list(self.differentials)
        updated[index] = form
        updated[conjugate_index(index)] = conjugate(form)
        return KTStructure((updated[0], updated[1], updated[2], updated[3]))


@lru_cache(maxsize=1)
def standard_structure() -> KTStructure:
    differentials = []
    for index in range(DIMENSION):
        real = to_real_frame(Form.generator(index))
        differentials.append(to_phi_basis(exterior_d(real)))
    return KTStructure((differentials[0], differentials[1], differentials[2], differentials[3]))


def scalar_differential(coeff: ScalarLike) -> Form:
    """df = V₁(f)φ¹ + V₂(f)φ² + V̄₁(f)φ̄¹ + V̄₂(f)φ̄²."""
    return Form({(i,): apply_vector(VECTOR_FIELDS[i], coeff) for i in range(DIMENSION)})


def leibniz_terms(alpha: Form, structure: KTStructure | None = None) -> list[LeibnizTerm]:
    """
    Expand dα term by term.

    For each monomial c·φ^w this yields dc∧φ^w followed by one term per
    generator of w, with the alternating sign of its position.
    """
    structure = structure or standard_structure()
    pieces = []
    for word, coeff in alpha.items():
        head = scalar_differential(coeff).wedge(Form.monomial(word))
        pieces.append(LeibnizTerm(word, None, head))
        for position, index in enumerate(word):
            piece = (
                Form.monomial(word[:position], (-1) ** position * coeff)
                .wedge(structure.differential(index))
                .wedge(Form.monomial(word[position + 1 :]))
            )
            pieces.append(LeibnizTerm(word, position, piece))
    return pieces


def _real_exterior_d(alpha: RealFrameForm) -> RealFrameForm:
    result = RealFrameForm()
    for word, coeff in alpha.items():
        if coeff.has(*FUNCTION_SYMBOLS):
            raise ValueError("Real-frame forms must have constant coefficients")
        for position, index in enumerate(word):
            result = result + (
                RealFrameForm.monomial(word[:position], (-1) ** position * coeff)
                .wedge(REAL_STRUCTURE_EQUATIONS[index])
                .wedge(RealFrameForm.monomial(word[position + 1 :]))
            )
    return result


def exterior_d(alpha: FormT, structure: KTStructure | None = None) -> FormT:
    """
    Exterior derivative.

    On φ-forms, coefficient functions differentiate through the V-frame and
    generators use the structure's differentials (dφ¹ = 0 and
    dφ² = (b/4)(φ^{12} + φ^{12̄} + φ^{21̄} − φ^{1̄2̄}) by default). On
    real-frame forms only constant coefficients are supported.

    Args:
        alpha: The form to differentiate
        structure: Generator differentials; the standard structure when omitted

    Returns:
        dα, in the same frame as α
    """
    if isinstance(alpha, RealFrameForm):
        return _real_exterior_d(alpha)
    result = Form()
    for piece in leibniz_terms(alpha, structure):
        result = result + piece.form
    return result  # type: ignore[return-value]


def bidegree_project(alpha: Form, p: int, q: int) -> Form:
    """The (p,q)-homogeneous part of α."""
    return Form(
        {word: coeff for word, coeff in alpha.terms.items() if Form.word_bidegree(word) == (p, q)}
    )


def _raise_degree(alpha: Form, dp: int, dq: int, structure: KTStructure | None) -> Form:
    result = Form()
    for p, q in alpha.bidegrees():
        component = bidegree_project(alpha, p, q)
        result = result + bidegree_project(exterior_d(component, structure), p + dp, q + dq)
    return result


def dbar(alpha: Form, structure: KTStructure | None = None) -> Form:
    """∂̄: the part of d raising q by one."""
    return _raise_degree(alpha, 0, 1, structure)


def partial(alpha: Form, structure: KTStructure | None = None) -> Form:
    """∂: the part of d raising p by one."""
    return _raise_degree(alpha, 1, 0, structure)


def metric_weight(index: int, rho_value: ScalarLike = rho) -> sympy.Expr:
    """Squared norm of a coframe generator: 1 for φ¹, φ̄¹ and 1/ρ for φ², φ̄²."""
    return sympy.Integer(1) if index in (PHI1, PHIBAR1) else 1 / sympy.sympify(rho_value)


def volume_form(rho_value: ScalarLike = rho) -> Form:
    """vol = ρφ^{121̄2̄}."""
    return Form.monomial((0, 1, 2, 3), rho_value)


def kahler_form(rho_value: ScalarLike = rho) -> Form:
    """ω = −2i(φ^{11̄} + ρφ^{22̄})."""
    return Form({(PHI1, PHIBAR1): -2 * sympy.I, (PHI2, PHIBAR2): -2 * sympy.I * rho_value})


def _star_monomial(word: Word, rho_value: ScalarLike) -> Form:
    sign_conj, partner = normalize_word(tuple(conjugate_index(i) for i in word))
    complement = tuple(i for i in range(DIMENSION) if i not in partner)
    sign_top, _ = normalize_word(partner + complement)
    weight = sympy.Integer(1)
    for index in word:
        weight *= metric_weight(index, rho_value)
    return Form.monomial(complement, sign_conj * sign_top * weight * rho_value)


def star_table(rho_value: ScalarLike = rho) -> dict[Word, Form]:
    """
    Hodge star of all 16 coframe monomials.

    Each entry solves α∧*β̄ = g(α, β)·vol for the metric
    g = φ¹⊗φ̄¹ + ρφ²⊗φ̄² + conjugates and vol = ρφ^{121̄2̄}.
    """
    words: list[Word] = [()]
    for degree in range(1, DIMENSION + 1):
        words.extend(w for w in _increasing_words(degree))
    return {word: _star_monomial(word, rho_value) for word in words}


def _increasing_words(degree: int, start: int = 0) -> Iterator[Word]:
    if degree == 0:
        yield ()
        return
    for first in range(start, DIMENSION):
        for rest in _increasing_words(degree - 1, first + 1):
            yield (first, *rest)


def hodge_star(alpha: Form, rho_value: ScalarLike = rho) -> Form:
    """
    Complex-linear Hodge star.

    Args:
        alpha: A form of a single bidegree
        rho_value: Metric parameter ρ

    Returns:
        *α

    Raises:
        ValueError: If α mixes bidegrees
    """
    if not alpha.is_homogeneous():
        raise ValueError(
            f"Hodge star requires a homogeneous form, got bidegrees {sorted(alpha.bidegrees())}"
        )
    result = Form()
    for word, coeff in alpha.terms.items():
        result = result + _star_monomial(word, rho_value) * coeff
    return result


def almost_complex_structure(a_value: ScalarLike = a, b_value: ScalarLike = b) -> sympy.Matrix:
    """
    The matrix J_{a,b} acting on the frame (e₁, e₂, e₃, e₄).

    Raises:
        ValueError: If b is zero
    """
    b_value = sympy.sympify(b_value)
    if b_value == 0:
        raise ValueError("b must be nonzero")
    c = -(sympy.sympify(a_value) ** 2 + 1) / b_value
    return sympy.Matrix(
        [
            [0, -1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, a_value, b_value],
            [0, 0, c, -a_value],
        ]
    )


def check_j_squared(a_value: ScalarLike = a, b_value: ScalarLike = b) -> bool:
    """J_{a,b}² = −1."""
    J = almost_complex_structure(a_value, b_value)
    return sympy.simplify(J * J + sympy.eye(4)) == sympy.zeros(4, 4)


def check_coframe_type(a_value: ScalarLike = a, b_value: ScalarLike = b) -> bool:
    """φ¹, φ² satisfy φ∘J = iφ and φ̄¹, φ̄² satisfy φ∘J = −iφ."""
    J = almost_complex_structure(a_value, b_value)
    for index, real in enumerate(_phi_in_real_frame()):
        row = sympy.Matrix([[real.coefficient((k,)) for k in range(DIMENSION)]])
        row = row.subs({a: a_value, b: b_value})
        eigen = sympy.I if index in (PHI1, PHI2) else -sympy.I
        if sympy.simplify(row * J - eigen * row) != sympy.zeros(1, DIMENSION):
            return False
    return True


def check_almost_kahler(
    structure: KTStructure | None = None, rho_value: ScalarLike = rho
) -> bool:
    """True iff dω vanishes identically for the given structure."""
    return exterior_d(kahler_form(rho_value), structure).is_zero()


@dataclass(frozen=True)
class Equation:
    """A scalar equation lhs = 0 in the formal unknowns."""

    lhs: sympy.Expr

    def __str__(self) -> str:
        return f"{format_scalar(self.lhs)} = 0"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Equation):
            return NotImplemented
        return sympy.expand(self.lhs - other.lhs) == 0

    def __hash__(self) -> int:
        return hash(sympy.expand(self.lhs))


def harmonic_form() -> Form:
    """The general (0,1)-form s = f·φ̄¹ + g·φ̄²."""
    return Form({(PHIBAR1,): f, (PHIBAR2,): g})


TOP_WORD: Word = (0, 1, 2, 3)


def star_side_terms(
    structure: KTStructure | None = None, rho_value: ScalarLike = rho
) -> list[tuple[LeibnizTerm, sympy.Expr]]:
    """
    Leibniz expansion of ∂(*s), keeping each term's φ^{121̄2̄} coefficient.

    Zero contributions are dropped. The two terms proportional to f itself
    carry +f·bρ/4 and −f·bρ/4.
    """
    starred = hodge_star(harmonic_form(), rho_value)
    contributions = []
    for piece in leibniz_terms(starred, structure):
        coeff = bidegree_project(piece.form, 2, 2).coefficient(TOP_WORD)
        if coeff != 0:
            contributions.append((piece, coeff))
    return contributions


def derive_harmonic_system(
    structure: KTStructure | None = None, rho_value: ScalarLike = rho
) -> tuple[Equation, Equation]:
    """
    Derive the two first-order equations for a harmonic (0,1)-form.

    Expands ∂̄s and ∂(*s) for s = f·φ̄¹ + g·φ̄² and reads off the φ^{1̄2̄}
    and φ^{121̄2̄} coefficients.

    Returns:
        (−V̄₂(f) + V̄₁(g) + (b/4)g = 0, ρV₁(f) + V₂(g) = 0) for the standard structure
    """
    s = harmonic_form()
    first = dbar(s, structure).coefficient((PHIBAR1, PHIBAR2))
    second = partial(hodge_star(s, rho_value), structure).coefficient(TOP_WORD)
    return Equation(first), Equation(second)


def expected_harmonic_system() -> tuple[Equation, Equation]:
    return (
        Equation(-Vb2(f) + Vb1(g) + b / 4 * g),
        Equation(rho * V1(f) + V2(g)),
    )


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool

    def __str__(self) -> str:
        return f"{self.name} {'PASS' if self.passed else 'FAIL'}"


def _double_star_holds(rho_value: ScalarLike) -> bool:
    for word in star_table(rho_value):
        k = len(word)
        twice = hodge_star(hodge_star(Form.monomial(word), rho_value), rho_value)
        if twice != (-1) ** (k * (4 - k)) * Form.monomial(word):
            return False
    return True


def _d_squared_vanishes(structure: KTStructure) -> bool:
    for word in star_table():
        if not exterior_d(exterior_d(Form.monomial(word), structure), structure).is_zero():
            return False
    return True


def check_identities(structure: KTStructure | None = None) -> list[IdentityCheck]:
    """
    Run every structural identity of the coframe, metric and star.

    Returns:
        One named check per identity, in a stable order
    """
    structure = structure or standard_structure()
    quarter = b / 4
    expected_dphi2 = Form({(0, 1): quarter, (0, 3): quarter, (1, 2): quarter, (2, 3): -quarter})
    expected_omega = RealFrameForm({(1, 0): 4, (2, 3): 4 * b * rho})
    star_phibar1 = Form.monomial((PHI2, PHIBAR1, PHIBAR2), rho)
    star_phibar2 = Form.monomial((PHI1, PHIBAR1, PHIBAR2), -1)
    phibar1, phibar2 = Form.generator(PHIBAR1), Form.generator(PHIBAR2)
    derived = derive_harmonic_system(structure)
    expected = expected_harmonic_system()
    return [
        IdentityCheck("J² = −1", check_j_squared()),
        IdentityCheck("φ∘J = iφ on (1,0)-forms", check_coframe_type()),
        IdentityCheck("dφ¹ = 0", structure.differential(PHI1).is_zero()),
        IdentityCheck(f"dφ² = {expected_dphi2}", structure.differential(PHI2) == expected_dphi2),
        IdentityCheck("d∘d = 0", _d_squared_vanishes(structure)),
        IdentityCheck("ω = 4(e^{21} + bρe^{34})", to_real_frame(kahler_form()) == expected_omega),
        IdentityCheck("dω = 0", check_almost_kahler(structure)),
        IdentityCheck(f"*φ̄¹ = {star_phibar1}", hodge_star(phibar1) == star_phibar1),
        IdentityCheck(f"*φ̄² = {star_phibar2}", hodge_star(phibar2) == star_phibar2),
        IdentityCheck("** = (−1)^{k(4−k)}", _double_star_holds(rho)),
        IdentityCheck(f"∂̄s: {expected[0]}", derived[0] == expected[0]),
        IdentityCheck(f"∂*s: {expected[1]}", derived[1] == expected[1]),
    ]
