"""Letter-induced derivations of the word algebra and their twisted
Dynkin-type operators.

A linear map from letters to the span of the letters extends by the Leibniz
rule to a degree-preserving derivation of the word algebra; such derivations
also preserve the Lie elements. Convolving the antipode with a derivation
gives an operator that can equally be computed as a left-nested bracketing,
and that projects onto the Lie elements after division by the relevant
eigenvalue.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .core_tensor import (
    GradedEndo,
    TensorElt,
    Word,
    ZERO,
    antipode_endo,
    bracket,
    convolve,
    letter_elt,
    word_elt,
    word_to_str,
)
from .errors import PreconditionError
from .sparse import as_fraction


def multiplicity(w: Word, letter: int) -> int:
    return w.count(letter)


def multidegree(w: Word, alphabet_size: int) -> tuple[int, ...]:
    """Per-letter multiplicity vector; entries sum to the length of ``w``."""
    return tuple(w.count(i) for i in range(alphabet_size))


class LetterDerivation:
    """Derivation induced by a linear map letter -> span of letters.

    ``images`` maps a letter index to its image, a homogeneous degree-1
    element; absent letters map to zero. Every such map is a derivation of
    the free Lie algebra, not only of the word algebra.
    """

    __slots__ = ("_images", "_endo", "_dynkin", "_diag")

    def __init__(self, images: Mapping[int, TensorElt | Mapping[int, object]]):
        norm = {}
        for letter, img in images.items():
            if not isinstance(img, TensorElt):
                img = TensorElt({(j,): as_fraction(c) for j, c in img.items()})
            if img and img.degrees() != [1]:
                raise PreconditionError(
                    f"image of letter {letter} must be homogeneous of degree 1"
                )
            if img:
                norm[letter] = img
        self._images = norm
        self._endo = None
        self._dynkin = None
        self._diag = -1  # not computed yet

    @classmethod
    def graduation(cls, alphabet_size: int = 26) -> "LetterDerivation":
        """The grading map Y: each letter to itself, so a word of length n is
        an eigenvector with eigenvalue n."""
        return cls({i: letter_elt(i) for i in range(alphabet_size)})

    @classmethod
    def single_letter(cls, letter: int) -> "LetterDerivation":
        """Counts the multiplicity of one letter (the noncommutative analogue
        of the partial derivative in that letter)."""
        return cls({letter: letter_elt(letter)})

    @classmethod
    def diagonal(cls, coeffs) -> "LetterDerivation":
        """Each letter scaled by its own coefficient; a word is an eigenvector
        with eigenvalue the sum of the coefficients of its letters."""
        return cls({i: letter_elt(i) * as_fraction(c) for i, c in enumerate(coeffs)})

    def image_of_letter(self, letter: int) -> TensorElt:
        return self._images.get(letter, ZERO)

    def _leibniz_word(self, w: Word) -> TensorElt:
        terms = []
        for pos in range(len(w)):
            img = self._images.get(w[pos])
            if img is None:
                continue
            for u, cu in img.items():
                terms.append((w[:pos] + u + w[pos + 1:], cu))
        return TensorElt(terms)

    def as_endo(self) -> GradedEndo:
        if self._endo is None:
            self._endo = GradedEndo(self._leibniz_word, shift=0, name="derivation")
        return self._endo

    def __call__(self, a) -> TensorElt:
        if isinstance(a, tuple):
            a = word_elt(a)
        return self.as_endo()(a)

    # diagonal support, used where the derivation must be inverted
    def _diag_coeffs(self):
        if self._diag == -1:
            diag = {}
            for letter, img in self._images.items():
                if set(img.keys()) <= {(letter,)}:
                    diag[letter] = img.coefficient((letter,))
                else:
                    diag = None
                    break
            self._diag = diag
        return self._diag

    def is_diagonal(self) -> bool:
        return self._diag_coeffs() is not None

    def word_eigenvalue(self, w: Word) -> Fraction:
        diag = self._diag_coeffs()
        if diag is None:
            raise PreconditionError("derivation is not diagonal on the letters")
        return sum((diag.get(i, Fraction(0)) for i in w), Fraction(0))

    def inverse_apply(self, a: TensorElt) -> TensorElt:
        """Apply the inverse derivation: divide each word by its eigenvalue."""
        terms = []
        for w, c in a.items():
            eig = self.word_eigenvalue(w)
            if not eig:
                raise PreconditionError(
                    "derivation not invertible: zero eigenvalue on word "
                    f"'{word_to_str(w)}'"
                )
            terms.append((w, c / eig))
        return TensorElt(terms)

    def dynkin_endo(self) -> GradedEndo:
        if self._dynkin is None:
            self._dynkin = convolve(antipode_endo(), self.as_endo())
        return self._dynkin


def apply_derivation(f: LetterDerivation, a: TensorElt) -> TensorElt:
    """Leibniz extension of ``f`` over the positions of each word."""
    return f(a)


def dynkin_bracket(f: LetterDerivation, w: Word) -> TensorElt:
    """Left-nested bracketing [...[[f(y1),y2],y3]...,yn] of a word; zero on
    the empty word."""
    if isinstance(w, TensorElt):
        raise TypeError("dynkin_bracket acts on a single word")
    if len(w) == 0:
        return ZERO
    out = f((w[0],))
    for letter in w[1:]:
        out = bracket(out, letter_elt(letter))
    return out


def dynkin_convolution(f: LetterDerivation, a) -> TensorElt:
    """Convolution of the antipode with the derivation; agrees with
    :func:`dynkin_bracket` word by word and lands in the Lie elements."""
    if isinstance(a, tuple):
        a = word_elt(a)
    return f.dynkin_endo()(a)


def lie_project(a: TensorElt, mode: str = "classical", letter: int | None = None) -> TensorElt:
    """Idempotent projection onto the Lie component.

    In classical mode the input must be homogeneous in length n >= 1 and the
    operator is D/n with D the convolution of the antipode and the grading
    map. In letter mode the input must be homogeneous in the multiplicity of
    the chosen letter, with multiplicity >= 1. Lie elements are fixed.
    """
    if not a:
        return a
    if mode == "classical":
        degs = a.degrees()
        if len(degs) != 1:
            raise PreconditionError("input must be homogeneous in length")
        n = degs[0]
        if n == 0:
            raise PreconditionError("cannot project a degree-0 element")
        return dynkin_convolution(LetterDerivation.graduation(), a) / n
    if mode == "letter":
        if letter is None:
            raise PreconditionError("letter mode requires a letter")
        mults = {multiplicity(w, letter) for w in a.keys()}
        if len(mults) != 1:
            raise PreconditionError(
                "input must be homogeneous in the multiplicity of the letter"
            )
        n = mults.pop()
        if n == 0:
            raise PreconditionError(
                "letter does not occur; projection undefined (division by zero)"
            )
        return dynkin_convolution(LetterDerivation.single_letter(letter), a) / n
    raise PreconditionError(f"unknown projection mode {mode!r}")
