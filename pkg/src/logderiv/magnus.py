"""Magnus-type series for logarithmic derivatives of exponentials.

The forward direction expands the logarithmic derivative of exp(l) with
respect to a derivation as the operator series

    sum_{i>=0} 1/(i+1)! (-ad_l)^i (delta(l)),

the inverse direction recovers l degree by degree from the Bernoulli form of
the inverse operator series, and the closed-form composition series inverts
the classical convolution operator (antipode convolved with the grading map)
on Lie-valued inputs.

All functions are generic over carriers with graded truncation, products, and
an ``is_primitive`` test (word-algebra and enveloping-algebra elements both
qualify).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PreconditionError

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (convention B_1 = -1/2), from the
    recurrence sum_{k<=n} C(n+1, k) B_k = 0."""
    if n < 0:
        raise PreconditionError(f"index must be >= 0, got {n}")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        acc = sum((math.comb(m + 1, k) * _BERNOULLI[k] for k in range(m)), Fraction(0))
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


def compositions(n: int):
    """All ordered tuples of positive integers summing to n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def _check_lie_input(l, what: str) -> None:
    if l.homogeneous(0):
        raise PreconditionError(f"{what} must have no degree-0 part")
    if not l.is_primitive():
        raise PreconditionError(f"{what} must be primitive (Lie valued)")


def _neg_ad(l, x, max_degree):
    return (x * l - l * x).truncate(max_degree)


def magnus_forward(delta, l, max_degree: int):
    """sum_i 1/(i+1)! (-ad_l)^i (delta(l)), truncated.

    Equals the convolution of the antipode with ``delta`` evaluated on the
    truncated exponential of ``l``. Since each adjoint application raises the
    degree by at least one, stopping at adjoint order max_degree - 1 is exact
    at the truncation.
    """
    _check_lie_input(l, "argument")
    l = l.truncate(max_degree)
    current = delta(l).truncate(max_degree)
    out = current
    fact = 1
    for i in range(1, max_degree):
        current = _neg_ad(l, current, max_degree)
        if not current:
            break
        fact *= i + 1
        out = out + current / fact
    return out


def _bernoulli_series(l, h, max_degree: int):
    """sum_k B_k / k! (-ad_l)^k (h), truncated."""
    current = h.truncate(max_degree)
    out = current  # B_0 = 1
    fact = 1
    for k in range(1, max_degree):
        current = _neg_ad(l, current, max_degree)
        if not current:
            break
        fact *= k
        b = bernoulli(k)
        if b:
            out = out + current * (b / fact)
    return out


def magnus_solve(delta, h, max_degree: int):
    """The unique ``l`` with magnus_forward(delta, l) = h up to the
    truncation, computed degree by degree via

        l = delta^{-1}( sum_k B_k / k! (-ad_l)^k (h) ),

    whose degree-n component only involves lower-degree components of l.
    ``delta`` must be an invertible diagonal derivation (an object exposing
    ``inverse_apply``).
    """
    if not hasattr(delta, "inverse_apply"):
        raise PreconditionError("solving requires an invertible diagonal derivation")
    _check_lie_input(h, "right-hand side")
    h = h.truncate(max_degree)
    l = h * 0
    for n in range(1, max_degree + 1):
        rhs = _bernoulli_series(l, h, max_degree)
        part = rhs.homogeneous(n)
        if part:
            l = l + delta.inverse_apply(part)
    return l


def dynkin_inverse(l, max_degree: int):
    """Group-like series with prescribed image under the convolution of the
    antipode with the grading map.

    Enumerates compositions (k_1, ..., k_m) by direct recursion on the first
    part, accumulating l_{k_1} ... l_{k_m} divided by the product of the
    left-to-right partial sums k_1 (k_1+k_2) ... (k_1+...+k_m).
    """
    _check_lie_input(l, "argument")
    one = l.one()
    parts = {n: l.homogeneous(n) for n in range(1, max_degree + 1)}
    parts = {n: p for n, p in parts.items() if p}
    total = one

    def expand(prefix, prefix_sum):
        nonlocal total
        for k in range(1, max_degree - prefix_sum + 1):
            lk = parts.get(k)
            if lk is None:
                continue
            s = prefix_sum + k
            piece = (prefix * lk) / s
            if piece:
                total = total + piece
                expand(piece, s)

    expand(one, 0)
    return total
