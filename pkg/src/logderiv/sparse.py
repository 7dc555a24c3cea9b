"""Shared machinery for sparse linear combinations over exact rationals."""

from __future__ import annotations

from fractions import Fraction

Scalar = (int, Fraction)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(q: Fraction) -> str:
    """Render a rational as ``p/q`` (denominator omitted when 1)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def combine(items) -> dict:
    """Sum an iterable of (key, coefficient) pairs, dropping exact zeros."""
    out: dict = {}
    for key, coeff in items:
        prev = out.get(key)
        c = as_fraction(coeff) if prev is None else prev + coeff
        if c:
            out[key] = c
        else:
            out.pop(key, None)
    return out


class LinearCombination:
    """Finite linear combination with exact Fraction coefficients.

    Instances are immutable by convention: no method mutates ``self`` and all
    operations return new objects, so values are safe to share across threads.
    Subclasses define the grading of keys (``_key_degree``) and whatever ring
    product makes sense on top of the vector-space operations provided here.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        self._terms = combine(terms.items() if isinstance(terms, dict) else terms)

    # subclass hooks
    def _make(self, terms):
        return type(self)(terms)

    def _key_degree(self, key) -> int:
        raise NotImplementedError

    def _same_space(self, other) -> bool:
        return True

    # access
    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return (
            type(self) is type(other)
            and self._same_space(other)
            and self._terms == other._terms
        )

    __hash__ = None  # mutable-dict backed; not meant for hashing

    # vector-space operations
    def __add__(self, other):
        if type(other) is not type(self) or not self._same_space(other):
            return NotImplemented
        return self._make(list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other):
        if type(other) is not type(self) or not self._same_space(other):
            return NotImplemented
        merged = list(self._terms.items())
        merged.extend((k, -c) for k, c in other._terms.items())
        return self._make(merged)

    def __neg__(self):
        return self._make((k, -c) for k, c in self._terms.items())

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if not other:
                return self._make(())
            return self._make((k, c * other) for k, c in self._terms.items())
        return NotImplemented

    __rmul__ = __mul__  # scalars only; ring products live on subclasses

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self._make((k, c / other) for k, c in self._terms.items())
        return NotImplemented

    # grading
    def homogeneous(self, degree: int):
        return self._make(
            (k, c) for k, c in self._terms.items() if self._key_degree(k) == degree
        )

    def truncate(self, degree: int):
        return self._make(
            (k, c) for k, c in self._terms.items() if self._key_degree(k) <= degree
        )

    def degrees(self) -> list[int]:
        return sorted({self._key_degree(k) for k in self._terms})

    def max_degree(self, default: int = 0) -> int:
        return max((self._key_degree(k) for k in self._terms), default=default)
