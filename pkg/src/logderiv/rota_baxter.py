"""Weight-theta Rota-Baxter contexts and the recursions they support.

A context bundles an associative graded carrier with a degree-preserving
operator R satisfying

    R(x)R(y) = R(R(x)y) + R(xR(y)) - theta R(xy)

and optionally a derivation d commuting with R. Two stock realizations are
provided: weight 0, where R inverts an invertible diagonal derivation, and
weight -1, where the carrier consists of finitely supported sequences over an
inner algebra with pointwise product and R is the strict partial-sum operator
along positions.

On top of a context the module computes the iterated-integral (Picard) terms
of the fixed point phi = 1 + R(phi x), the twisted terms describing the
logarithmic derivative of phi with respect to d, and the associated pre-Lie
product with its fixed-point recursion. The carrier is duck typed: anything
with graded truncation, +, -, scalar and ring *, works. Identities are
checked on construction rather than assumed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from . import core_tensor
from . import enveloping
from .dynkin import LetterDerivation
from .errors import PreconditionError


class RBContext:
    """Associative graded carrier + weight-theta operator R (+ optional d)."""

    __slots__ = ("one", "R", "theta", "d", "label")

    def __init__(self, one, R: Callable, theta, d: Callable | None = None,
                 label: str = ""):
        self.one = one
        self.R = R
        self.theta = Fraction(theta)
        self.d = d
        self.label = label

    def __repr__(self):
        return f"RBContext({self.label or 'custom'}, theta={self.theta})"


def rb_defect(ctx: RBContext, x, y):
    """R(x)R(y) - R(R(x)y) - R(xR(y)) + theta R(xy); zero iff the weighted
    identity holds on the pair."""
    R = ctx.R
    return R(x) * R(y) - R(R(x) * y) - R(x * R(y)) + R(x * y) * ctx.theta


def check_context(ctx: RBContext, pairs=(), elements=()) -> None:
    """Verify the weighted identity on sample pairs and the commutation of d
    with R on sample elements; abort with a diagnostic on failure."""
    for x, y in pairs:
        if rb_defect(ctx, x, y):
            raise PreconditionError(
                f"Rota-Baxter identity (theta={ctx.theta}) fails on ({x}, {y})")
    if ctx.d is not None:
        for x in elements:
            if ctx.d(ctx.R(x)) != ctx.R(ctx.d(x)):
                raise PreconditionError(
                    f"derivation does not commute with R on {x}")


# ---------------------------------------------------------------------------
# weight-0 realization: R inverts an invertible diagonal derivation

def tensor_graded_inverse_context(delta: LetterDerivation | None = None,
                                  d: Callable | None = None,
                                  alphabet_size: int = 2) -> RBContext:
    """Weight-0 context on the word algebra, R = inverse of ``delta``
    (default: the grading map, which divides degree n by n)."""
    if delta is None:
        delta = LetterDerivation.graduation()
    if not delta.is_diagonal():
        raise PreconditionError("the inverted derivation must be diagonal")
    for i in range(alphabet_size):
        if not delta.word_eigenvalue((i,)):
            raise PreconditionError(
                f"derivation not invertible: zero eigenvalue on letter "
                f"{core_tensor.LETTER_NAMES[i]}")
    ctx = RBContext(core_tensor.ONE, delta.inverse_apply, 0, d=d,
                    label="word-algebra graded inverse")
    letters = [core_tensor.letter_elt(i) for i in range(alphabet_size)]
    pairs = [(u, v) for u in letters for v in letters]
    pairs += [(u * v, w) for (u, v) in pairs[:2] for w in letters[:1]]
    check_context(ctx, pairs, letters + [u * v for u, v in pairs[:2]])
    return ctx


def pbw_graded_inverse_context(alg: enveloping.LiePresentation,
                               delta: enveloping.TableDerivation | None = None,
                               d: Callable | None = None) -> RBContext:
    """Weight-0 context on an enveloping algebra, R = inverse of a diagonal
    derivation (default: the grading derivation of the presentation)."""
    if delta is None:
        delta = alg.graduation_derivation()
    if not delta.is_diagonal():
        raise PreconditionError("the inverted derivation must be diagonal")
    for i in range(len(alg.names)):
        if not delta.monomial_eigenvalue((i,)):
            raise PreconditionError(
                f"derivation not invertible: zero eigenvalue on {alg.names[i]}")
    ctx = RBContext(alg.one(), delta.inverse_apply, 0, d=d,
                    label="enveloping-algebra graded inverse")
    gens = [alg.generator(i) for i in range(len(alg.names))]
    pairs = [(u, v) for u in gens[:3] for v in gens[:3]]
    check_context(ctx, pairs, gens)
    return ctx


# ---------------------------------------------------------------------------
# weight -1 realization: partial sums of finitely supported sequences

class SeqElt:
    """Finitely supported sequence over an inner graded algebra, with
    pointwise product; the grading is inherited pointwise from the values."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = tuple(values)

    def _zip(self, other, op):
        if len(self.values) != len(other.values):
            raise ValueError("sequences have different supports")
        return SeqElt(op(u, v) for u, v in zip(self.values, other.values))

    def __add__(self, other):
        if not isinstance(other, SeqElt):
            return NotImplemented
        return self._zip(other, lambda u, v: u + v)

    def __sub__(self, other):
        if not isinstance(other, SeqElt):
            return NotImplemented
        return self._zip(other, lambda u, v: u - v)

    def __neg__(self):
        return SeqElt(-u for u in self.values)

    def __mul__(self, other):
        if isinstance(other, SeqElt):
            return self._zip(other, lambda u, v: u * v)
        return SeqElt(u * other for u in self.values)

    def __rmul__(self, other):
        return SeqElt(u * other for u in self.values)

    def __truediv__(self, other):
        return SeqElt(u / other for u in self.values)

    def truncate(self, degree):
        return SeqElt(u.truncate(degree) for u in self.values)

    def homogeneous(self, degree):
        return SeqElt(u.homogeneous(degree) for u in self.values)

    def __eq__(self, other):
        return isinstance(other, SeqElt) and self.values == other.values

    __hash__ = None

    def __bool__(self):
        return any(bool(u) for u in self.values)

    def __str__(self):
        return "[" + "; ".join(str(u) for u in self.values) + "]"

    __repr__ = __str__


def sequence_context(length: int, inner_one, inner_d: Callable | None = None,
                     check_samples=()) -> RBContext:
    """Weight -1 context: R(s)(n) = sum of s(k) for k < n, together with any
    inner derivation applied pointwise (which automatically commutes with R).
    """
    if length < 1:
        raise PreconditionError("sequence support must be nonempty")
    zero = inner_one * 0
    one = SeqElt([inner_one] * length)

    def R(s: SeqElt) -> SeqElt:
        out = []
        acc = zero
        for v in s.values:
            out.append(acc)
            acc = acc + v
        return SeqElt(out)

    d = None
    if inner_d is not None:
        d = lambda s: SeqElt(inner_d(v) for v in s.values)
    ctx = RBContext(one, R, -1, d=d, label="sequence partial sums")
    check_context(ctx, [(x, y) for x in check_samples for y in check_samples],
                  check_samples)
    return ctx


# ---------------------------------------------------------------------------
# recursions

def _require_positive(x) -> None:
    if x.homogeneous(0):
        raise PreconditionError("generator must have no degree-0 part")


def picard_terms(ctx: RBContext, x, order: int) -> list:
    """First terms of the iterated-integral expansion: term 1 is R(x) and
    term n+1 is R(term_n * x); each is truncated at ``order``."""
    if order < 1:
        raise PreconditionError(f"order must be >= 1, got {order}")
    _require_positive(x)
    x = x.truncate(order)
    terms = [ctx.R(x)]
    for _ in range(order - 1):
        terms.append(ctx.R((terms[-1] * x).truncate(order)))
    return terms


def atkinson_solve(ctx: RBContext, x, order: int):
    """Order-by-order fixed point of phi = 1 + R(phi x)."""
    if not x:
        return ctx.one
    phi = ctx.one
    for term in picard_terms(ctx, x, order):
        phi = phi + term
    return phi


def atkinson_defect(ctx: RBContext, phi, x, order: int):
    """phi - 1 - R(phi x), truncated; zero up to ``order`` at the fixed point."""
    return (phi - ctx.one - ctx.R((phi * x.truncate(order)).truncate(order))).truncate(order)


def logderiv_terms(ctx: RBContext, x, order: int) -> list[tuple]:
    """Twisted term pairs (I_n, R(I_n)) for the logarithmic derivative of the
    fixed point with respect to ctx.d:

        I_1 = d(x),  I_{n+1} = [R(I_n), x] + theta x I_n.

    Their R-images sum to the logarithmic derivative phi^{-1} d(phi).
    """
    if ctx.d is None:
        raise PreconditionError("context has no commuting derivation")
    if order < 1:
        raise PreconditionError(f"order must be >= 1, got {order}")
    _require_positive(x)
    x = x.truncate(order)
    current = ctx.d(x).truncate(order)
    out = [(current, ctx.R(current))]
    for _ in range(order - 1):
        rd = out[-1][1]
        current = (rd * x - x * rd + (x * current) * ctx.theta).truncate(order)
        out.append((current, ctx.R(current)))
    return out


def logderiv_sum(ctx: RBContext, x, order: int):
    """Sum of the R-images of the twisted terms."""
    total = None
    for _, rd in logderiv_terms(ctx, x, order):
        total = rd if total is None else total + rd
    return total


def prelie(ctx: RBContext, x, y):
    """The pre-Lie product attached to the context: [R(x), y] + theta y x."""
    rx = ctx.R(x)
    return rx * y - y * rx + (y * x) * ctx.theta


def prelie_solve(ctx: RBContext, x, order: int):
    """Order-by-order solution y of y = d(x) + (y pre-Lie x); its R-image
    equals the sum of the twisted terms."""
    if ctx.d is None:
        raise PreconditionError("context has no commuting derivation")
    _require_positive(x)
    x = x.truncate(order)
    dx = ctx.d(x).truncate(order)
    y = dx
    for _ in range(order):
        y = (dx + prelie(ctx, y, x)).truncate(order)
    return y


def series_inverse(one, phi, order: int):
    """Multiplicative inverse of an element with constant term 1, truncated."""
    u = phi - one
    if u.homogeneous(0):
        raise PreconditionError("series must have constant term exactly 1")
    out = one
    power = one
    sign = 1
    for _ in range(order):
        power = (power * u).truncate(order)
        if not power:
            break
        sign = -sign
        out = out + power * sign
    return out


def direct_logderiv(ctx: RBContext, phi, order: int):
    """phi^{-1} d(phi) computed directly from the series, independent of the
    twisted recursion."""
    if ctx.d is None:
        raise PreconditionError("context has no commuting derivation")
    inv = series_inverse(ctx.one, phi.truncate(order), order)
    return (inv * ctx.d(phi.truncate(order))).truncate(order)
