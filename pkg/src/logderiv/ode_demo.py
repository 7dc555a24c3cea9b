"""Exact matrix-polynomial realization of the classical Magnus setup.

The linear initial-value problem X'(t) = X(t) * lambda A(t), X(0) = 1, with
polynomial matrix coefficients, is solved by iterated integration per power
of the formal parameter lambda; integration from 0 to t is a weight-0
Rota-Baxter operator on polynomial matrices, so the series is an instance of
the fixed point phi = 1 + R(phi x). The logarithm of the solution satisfies
the Bernoulli-coefficient operator identity relating it back to the
generator, which is checked here as an exact polynomial identity.

All coefficient arithmetic is exact: matrix entries are polynomials in t over
the rationals, and d/dt and the definite integral from 0 are exact
degree-shifting maps.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable

from .errors import PreconditionError
from .sparse import Scalar, as_fraction, format_fraction

# dense univariate polynomials over Fraction, trailing zeros trimmed

Poly = tuple


def _ptrim(coeffs) -> Poly:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def _padd(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] += c
    return _ptrim(out)


def _pscale(p: Poly, c: Fraction) -> Poly:
    if not c:
        return ()
    return tuple(a * c for a in p)


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _ptrim(out)


def _pderiv(p: Poly) -> Poly:
    return _ptrim(p[k] * k for k in range(1, len(p)))


def _pint(p: Poly) -> Poly:
    """Definite integral from 0 to t (degree-raising, zero constant term)."""
    return _ptrim([Fraction(0)] + [c / (k + 1) for k, c in enumerate(p)])


def poly_to_str(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p):
        if not c:
            continue
        if k == 0:
            parts.append(format_fraction(c))
        else:
            t = "t" if k == 1 else f"t^{k}"
            parts.append(t if c == 1 else f"{format_fraction(c)}*{t}")
    return " + ".join(parts).replace("+ -", "- ")


class MatrixPoly:
    """Square matrix (dimension at most 4) of exact polynomials in t."""

    __slots__ = ("rows", "dim")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(_ptrim(as_fraction(c) for c in entry) for entry in row)
                     for row in rows)
        dim = len(rows)
        if dim < 1 or dim > 4:
            raise PreconditionError(f"matrix dimension must be 1..4, got {dim}")
        if any(len(row) != dim for row in rows):
            raise PreconditionError("matrix must be square")
        self.rows = rows
        self.dim = dim

    @classmethod
    def zeros(cls, dim: int) -> "MatrixPoly":
        return cls([[()] * dim for _ in range(dim)])

    @classmethod
    def identity(cls, dim: int) -> "MatrixPoly":
        return cls([[(1,) if i == j else () for j in range(dim)] for i in range(dim)])

    @classmethod
    def from_scalars(cls, entries) -> "MatrixPoly":
        return cls([[(as_fraction(c),) if c else () for c in row] for row in entries])

    def __add__(self, other):
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        self._check(other)
        return MatrixPoly([[_padd(a, b) for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return MatrixPoly([[_pscale(e, Fraction(-1)) for e in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, MatrixPoly):
            self._check(other)
            n = self.dim
            return MatrixPoly(
                [[_ptrim(self._dot(i, j, other)) for j in range(n)] for i in range(n)])
        if isinstance(other, Scalar):
            c = as_fraction(other)
            return MatrixPoly([[_pscale(e, c) for e in row] for row in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self * (Fraction(1) / as_fraction(other))
        return NotImplemented

    def _dot(self, i, j, other):
        acc: Poly = ()
        for k in range(self.dim):
            acc = _padd(acc, _pmul(self.rows[i][k], other.rows[k][j]))
        return acc

    def _check(self, other):
        if self.dim != other.dim:
            raise ValueError("matrix dimensions differ")

    def derivative(self) -> "MatrixPoly":
        return MatrixPoly([[_pderiv(e) for e in row] for row in self.rows])

    def integrate(self) -> "MatrixPoly":
        """Entrywise definite integral from 0 to t."""
        return MatrixPoly([[_pint(e) for e in row] for row in self.rows])

    def __eq__(self, other):
        return (isinstance(other, MatrixPoly) and self.dim == other.dim
                and self.rows == other.rows)

    __hash__ = None

    def __bool__(self):
        return any(any(e for e in row) for row in self.rows)

    def __str__(self):
        return "[" + "; ".join(
            ", ".join(poly_to_str(e) for e in row) for row in self.rows) + "]"

    __repr__ = __str__


def commutator(a: MatrixPoly, b: MatrixPoly) -> MatrixPoly:
    return a * b - b * a


class LambdaSeries:
    """Polynomial in the grading parameter lambda with MatrixPoly
    coefficients; the product is the Cauchy convolution in lambda with matrix
    multiplication on components."""

    __slots__ = ("components", "dim")

    def __init__(self, components: Iterable[MatrixPoly]):
        comps = list(components)
        if not comps:
            raise ValueError("a series needs at least one component")
        dims = {c.dim for c in comps}
        if len(dims) != 1:
            raise ValueError("components have mixed dimensions")
        while len(comps) > 1 and not comps[-1]:
            comps.pop()
        self.components = tuple(comps)
        self.dim = comps[0].dim

    @classmethod
    def unit(cls, dim: int) -> "LambdaSeries":
        return cls([MatrixPoly.identity(dim)])

    @classmethod
    def zero(cls, dim: int) -> "LambdaSeries":
        return cls([MatrixPoly.zeros(dim)])

    @classmethod
    def embed(cls, m: MatrixPoly, power: int = 1) -> "LambdaSeries":
        """The component ``m`` placed at the given lambda power."""
        return cls([MatrixPoly.zeros(m.dim)] * power + [m])

    def component(self, n: int) -> MatrixPoly:
        if 0 <= n < len(self.components):
            return self.components[n]
        return MatrixPoly.zeros(self.dim)

    def order(self) -> int:
        return len(self.components) - 1

    def _align(self, other):
        n = max(len(self.components), len(other.components))
        return ([self.component(k) for k in range(n)],
                [other.component(k) for k in range(n)])

    def __add__(self, other):
        if not isinstance(other, LambdaSeries):
            return NotImplemented
        a, b = self._align(other)
        return LambdaSeries([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        if not isinstance(other, LambdaSeries):
            return NotImplemented
        a, b = self._align(other)
        return LambdaSeries([x - y for x, y in zip(a, b)])

    def __neg__(self):
        return LambdaSeries([-c for c in self.components])

    def __mul__(self, other):
        if isinstance(other, LambdaSeries):
            if self.dim != other.dim:
                raise ValueError("series dimensions differ")
            n = len(self.components) + len(other.components) - 1
            out = [MatrixPoly.zeros(self.dim) for _ in range(n)]
            for i, a in enumerate(self.components):
                if not a:
                    continue
                for j, b in enumerate(other.components):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return LambdaSeries(out)
        if isinstance(other, Scalar):
            return LambdaSeries([c * other for c in self.components])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            inv = Fraction(1) / as_fraction(other)
            return self * inv
        return NotImplemented

    def truncate(self, order: int) -> "LambdaSeries":
        return LambdaSeries(self.components[: order + 1])

    def derivative(self) -> "LambdaSeries":
        return LambdaSeries([c.derivative() for c in self.components])

    def integrate(self) -> "LambdaSeries":
        return LambdaSeries([c.integrate() for c in self.components])

    def __eq__(self, other):
        return (isinstance(other, LambdaSeries) and self.dim == other.dim
                and self.components == other.components)

    __hash__ = None

    def __bool__(self):
        return any(bool(c) for c in self.components)

    def __str__(self):
        return " + ".join(f"lambda^{k} {c}" for k, c in enumerate(self.components))

    __repr__ = __str__


def picard_matrix(a: MatrixPoly, order: int) -> LambdaSeries:
    """Iterated-integral solution of X' = X lambda A, X(0) = 1; the n-th
    lambda component is the n-fold iterated integral."""
    if order < 1:
        raise PreconditionError(f"order must be >= 1, got {order}")
    comps = [MatrixPoly.identity(a.dim)]
    for _ in range(order):
        comps.append((comps[-1] * a).integrate())
    return LambdaSeries(comps)


def lambda_exp(s: LambdaSeries, order: int) -> LambdaSeries:
    """Exponential of a series with vanishing lambda-degree-0 component."""
    if s.component(0):
        raise PreconditionError("exponential requires zero constant component")
    out = LambdaSeries.unit(s.dim)
    power = LambdaSeries.unit(s.dim)
    fact = 1
    for k in range(1, order + 1):
        power = (power * s).truncate(order)
        if not power:
            break
        fact *= k
        out = out + power / fact
    return out


def omega_log(x: LambdaSeries, order: int) -> LambdaSeries:
    """Lambda-graded logarithm; exp(omega_log(x)) = x up to the order."""
    if x.component(0) != MatrixPoly.identity(x.dim):
        raise PreconditionError("logarithm requires identity constant component")
    u = (x - LambdaSeries.unit(x.dim)).truncate(order)
    out = LambdaSeries.zero(x.dim)
    power = LambdaSeries.unit(x.dim)
    for k in range(1, order + 1):
        power = (power * u).truncate(order)
        if not power:
            break
        out = out + power * Fraction((-1) ** (k + 1), k)
    return out


def magnus_relation_check(a: MatrixPoly, order: int) -> bool:
    """Exact check that sum_i 1/(i+1)! (-ad_Omega)^i (Omega') equals
    lambda A identically in t up to the lambda order, where Omega is the
    logarithm of the iterated-integral solution."""
    x = picard_matrix(a, order)
    omega = omega_log(x, order)
    omega_prime = omega.derivative()
    acc = omega_prime
    current = omega_prime
    fact = 1
    for i in range(1, order):
        current = (current * omega - omega * current).truncate(order)
        if not current:
            break
        fact *= i + 1
        acc = acc + current / fact
    target = LambdaSeries.embed(a, power=1)
    return acc.truncate(order) == target.truncate(order)


def prelie_time(m: LambdaSeries, n: LambdaSeries) -> LambdaSeries:
    """Time pre-Lie product: integral from 0 to t of [n(u), m'(u)] du; its
    derivative is the commutator [n, m']."""
    mp = m.derivative()
    return (n * mp - mp * n).integrate()


# ---------------------------------------------------------------------------
# matrix input files

def load_matrix(source) -> MatrixPoly:
    """Read a MatrixPoly from JSON: ``{"dim": m, "entries": [[["p/q", ...],
    ...], ...]}`` where each entry lists t-coefficients as exact rational
    strings."""
    if isinstance(source, (str, bytes)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError:
            with open(source, encoding="utf-8") as fh:
                data = json.load(fh)
    elif isinstance(source, dict):
        data = source
    else:
        data = json.load(source)
    dim = int(data["dim"])
    entries = data["entries"]
    if len(entries) != dim or any(len(row) != dim for row in entries):
        raise PreconditionError("entry grid does not match the declared dimension")
    return MatrixPoly([[tuple(Fraction(str(c)) for c in entry) for entry in row]
                       for row in entries])


def dump_matrix(m: MatrixPoly) -> dict:
    return {
        "dim": m.dim,
        "entries": [[[format_fraction(c) for c in entry] for entry in row]
                    for row in m.rows],
    }
