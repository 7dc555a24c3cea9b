"""The word algebra over a finite alphabet as a graded connected Hopf algebra.

Words are tuples of letter indices and elements are exact rational
combinations of words, graded by length. The product is concatenation, the
coproduct is the unshuffle (sum over splits of the positions into two
complementary increasing subsequences), the antipode reverses words with sign
``(-1)**length``. Convolution of linear endomorphisms and the usual free-Lie
utilities (Lyndon words, standard-factorization bracketings, primitivity)
round out the module.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Callable, Iterable

from .errors import PreconditionError
from .sparse import LinearCombination, format_fraction

Word = tuple  # a word is a tuple of letter indices

EMPTY_WORD: Word = ()

LETTER_NAMES = "abcdefghijklmnopqrstuvwxyz"


def word_to_str(w: Word) -> str:
    return "".join(LETTER_NAMES[i] if i < 26 else f"<{i}>" for i in w)


def word_from_str(text: str) -> Word:
    """Inverse of :func:`word_to_str` for alphabets of at most 26 letters."""
    out = []
    for ch in text:
        idx = LETTER_NAMES.find(ch)
        if idx < 0:
            raise ValueError(f"not a letter: {ch!r}")
        out.append(idx)
    return tuple(out)


class TensorElt(LinearCombination):
    """Exact rational combination of words."""

    __slots__ = ()

    def _key_degree(self, key):
        return len(key)

    def __mul__(self, other):
        if isinstance(other, TensorElt):
            return concat_mul(self, other)
        return super().__mul__(other)

    def one(self) -> "TensorElt":
        return ONE

    def constant_term(self) -> Fraction:
        return self.coefficient(EMPTY_WORD)

    def is_primitive(self) -> bool:
        return is_primitive(self)

    def __str__(self):
        return format_terms(self, word_to_str)

    __repr__ = __str__


class TensorElt2(LinearCombination):
    """Combination of pairs of words (an element of the twofold tensor square)."""

    __slots__ = ()

    def _key_degree(self, key):
        return len(key[0]) + len(key[1])

    def __mul__(self, other):
        # componentwise concatenation
        if isinstance(other, TensorElt2):
            terms = []
            for (p1, q1), c1 in self.items():
                for (p2, q2), c2 in other.items():
                    terms.append(((p1 + p2, q1 + q2), c1 * c2))
            return TensorElt2(terms)
        return super().__mul__(other)

    def swap(self) -> "TensorElt2":
        return TensorElt2(((q, p), c) for (p, q), c in self.items())

    def __str__(self):
        return format_terms(self, lambda k: f"{word_to_str(k[0])}|{word_to_str(k[1])}")

    __repr__ = __str__


def format_terms(a: LinearCombination, key_str: Callable) -> str:
    if not a:
        return "0"
    parts = []
    for key in sorted(a.keys(), key=lambda k: (a._key_degree(k), k)):
        c = a.coefficient(key)
        body = key_str(key)
        mag = abs(c)
        if not body:
            text = format_fraction(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{format_fraction(mag)}*{body}"
        if not parts:
            parts.append(text if c > 0 else f"-{text}")
        else:
            parts.append(f"+ {text}" if c > 0 else f"- {text}")
    return " ".join(parts)


def word_elt(w: Iterable[int]) -> TensorElt:
    return TensorElt({tuple(w): Fraction(1)})


def letter_elt(i: int) -> TensorElt:
    return TensorElt({(i,): Fraction(1)})


ONE = TensorElt({EMPTY_WORD: Fraction(1)})
ZERO = TensorElt()


def concat_mul(a: TensorElt, b: TensorElt) -> TensorElt:
    """Bilinear extension of word juxtaposition (degree additive, unit ONE)."""
    terms = []
    for u, cu in a.items():
        for v, cv in b.items():
            terms.append((u + v, cu * cv))
    return TensorElt(terms)


def bracket(a: TensorElt, b: TensorElt) -> TensorElt:
    """Commutator a*b - b*a."""
    return concat_mul(a, b) - concat_mul(b, a)


@functools.lru_cache(maxsize=None)
def unshuffle(w: Word) -> TensorElt2:
    """Sum over all 2**n splits of the positions of ``w`` into two
    complementary increasing subsequences."""
    w = tuple(w)
    n = len(w)
    terms = []
    for mask in range(1 << n):
        left = tuple(w[i] for i in range(n) if mask >> i & 1)
        right = tuple(w[i] for i in range(n) if not mask >> i & 1)
        terms.append(((left, right), Fraction(1)))
    return TensorElt2(terms)


def coproduct(a: TensorElt) -> TensorElt2:
    """Linear extension of :func:`unshuffle`."""
    terms = []
    for w, c in a.items():
        terms.extend((k, c * q) for k, q in unshuffle(w).items())
    return TensorElt2(terms)


def outer(a: TensorElt, b: TensorElt) -> TensorElt2:
    """The pair combination a (x) b."""
    terms = []
    for u, cu in a.items():
        for v, cv in b.items():
            terms.append(((u, v), cu * cv))
    return TensorElt2(terms)


def antipode(a: TensorElt) -> TensorElt:
    """Per-word reversal with sign (-1)**length, extended linearly."""
    return TensorElt(((w[::-1], c * (-1) ** len(w)) for w, c in a.items()))


def is_primitive(a: TensorElt) -> bool:
    """True iff the coproduct of ``a`` is exactly a(x)1 + 1(x)a."""
    return coproduct(a) == outer(a, ONE) + outer(ONE, a)


def is_grouplike(a: TensorElt, max_degree: int) -> bool:
    """True iff ``a`` has constant term 1 and its coproduct equals a(x)a in
    all total degrees up to ``max_degree``."""
    if a.constant_term() != 1:
        return False
    t = a.truncate(max_degree)
    return coproduct(t).truncate(max_degree) == outer(t, t).truncate(max_degree)


class GradedEndo:
    """Linear endomorphism of the word algebra, given by its action on words.

    Per-word results are cached; since all values are immutable the cache is
    observationally transparent (a racing recomputation under concurrent use
    stores an equal value). ``shift`` is an optional annotation recording by
    how much the map moves the grading; it is not used computationally.
    """

    __slots__ = ("_fn", "_cache", "shift", "name")

    def __init__(self, fn: Callable[[Word], TensorElt], *, shift: int | None = None,
                 name: str | None = None):
        self._fn = fn
        self._cache: dict = {}
        self.shift = shift
        self.name = name

    def on_word(self, w: Word) -> TensorElt:
        cached = self._cache.get(w)
        if cached is None:
            cached = self._fn(w)
            self._cache[w] = cached
        return cached

    def __call__(self, a) -> TensorElt:
        if isinstance(a, tuple):
            return self.on_word(a)
        terms = []
        for w, c in a.items():
            terms.extend((k, c * q) for k, q in self.on_word(w).items())
        return TensorElt(terms)

    def __add__(self, other: "GradedEndo") -> "GradedEndo":
        return GradedEndo(lambda w: self.on_word(w) + other.on_word(w))

    def compose(self, other: "GradedEndo") -> "GradedEndo":
        """self after other."""
        return GradedEndo(lambda w: self(other.on_word(w)))

    def convolve(self, other: "GradedEndo") -> "GradedEndo":
        return convolve(self, other)

    def __repr__(self):
        return f"GradedEndo({self.name or self._fn!r})"


def convolve(f: GradedEndo, g: GradedEndo) -> GradedEndo:
    """Convolution product: on a word, sum f(left)*g(right) over all splits.

    Associative, with the counit-unit composite ``counit_endo`` as neutral
    element.
    """

    def fn(w):
        terms = []
        for (u, v), c in unshuffle(w).items():
            prod = concat_mul(f.on_word(u), g.on_word(v))
            terms.extend((k, c * q) for k, q in prod.items())
        return TensorElt(terms)

    return GradedEndo(fn, name=f"({f.name or 'f'} * {g.name or 'g'})")


def identity_endo() -> GradedEndo:
    return GradedEndo(word_elt, shift=0, name="id")


def counit_endo() -> GradedEndo:
    """The neutral element of convolution: projection onto the scalars."""
    return GradedEndo(lambda w: ONE if not w else ZERO, name="nu")


def antipode_endo() -> GradedEndo:
    return GradedEndo(lambda w: antipode(word_elt(w)), shift=0, name="S")


def lyndon_words(alphabet_size: int, degree: int) -> list[Word]:
    """All Lyndon words of the given length in lexicographic order
    (Duval's generation algorithm)."""
    if degree < 1:
        raise PreconditionError(f"degree must be >= 1, got {degree}")
    if alphabet_size < 1:
        raise PreconditionError(f"alphabet size must be >= 1, got {alphabet_size}")
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == degree:
            out.append(tuple(w))
        while len(w) < degree:
            w.append(w[-m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    return out


def is_lyndon(w: Word) -> bool:
    """A word is Lyndon iff it is strictly smaller than all proper rotations."""
    return len(w) > 0 and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_bracketing(w: Word) -> TensorElt:
    """Left/right bracketing of a Lyndon word at its standard factorization.

    The factorization w = u v takes v as the longest proper Lyndon suffix;
    the result is primitive, and over each degree the bracketings of all
    Lyndon words form a basis of the Lie elements.
    """
    w = tuple(w)
    if not is_lyndon(w):
        raise PreconditionError(f"not a Lyndon word: {word_to_str(w) or w!r}")
    if len(w) == 1:
        return letter_elt(w[0])
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return bracket(lyndon_bracketing(w[:i]), lyndon_bracketing(w[i:]))
    raise AssertionError("unreachable: every Lyndon word of length > 1 factors")
