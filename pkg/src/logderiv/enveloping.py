"""Enveloping algebras of graded Lie algebras given by basis and structure
constants.

A presentation lists an ordered basis with positive degrees, the brackets of
basis pairs (stored for i < j only, extended by antisymmetry), and optionally
a derivation table. Brackets whose degree exceeds the presentation's bound
are dropped, so the presentation models the nilpotent quotient at that bound;
this keeps infinite-dimensional families (such as the algebra of polynomial
vector fields spanned by x^(n+1) d/dx) usable at a fixed truncation.

Enveloping-algebra elements are kept in normal form: rational combinations of
nondecreasing generator monomials, with out-of-order products straightened
through the structure constants. Generators are primitive for the coproduct,
which therefore admits the same subset expansion as the word-algebra
coproduct, and the antipode reverses monomials with sign.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

from . import core_tensor
from . import linalg
from .errors import PreconditionError, PresentationError
from .sparse import LinearCombination, as_fraction, format_fraction


def _vec(mapping) -> dict[int, Fraction]:
    return {int(k): as_fraction(c) for k, c in mapping.items() if c}


def _vec_add(u: dict, v: dict, scale: Fraction = Fraction(1)) -> dict:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, Fraction(0)) + c * scale
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


class LiePresentation:
    """Graded Lie algebra presented by an indexed basis and structure constants.

    ``basis`` is a sequence of (name, degree) with degree >= 1. ``brackets``
    maps generator index pairs to the expansion of their bracket as a mapping
    index -> coefficient; pairs may be given in either order and are
    normalized to i < j. ``derivation`` optionally maps each generator index
    to the expansion of its image.

    Validation checks degree additivity of the brackets, the Jacobi identity
    on all basis triples, and (when a derivation is present) that the table
    is degree preserving and satisfies the Leibniz rule on all basis pairs;
    the first failing tuple is reported. ``derivation_is_lie`` records the
    outcome of the Leibniz check, which can be skipped for tables that are
    deliberately not derivations of the bracket.
    """

    def __init__(self, basis: Iterable[tuple[str, int]], brackets: Mapping,
                 derivation: Mapping | None = None, max_degree: int | None = None,
                 check: bool = True, check_derivation: bool = True):
        basis = list(basis)
        self.names = tuple(str(name) for name, _ in basis)
        self.degrees = tuple(int(deg) for _, deg in basis)
        if any(d < 1 for d in self.degrees):
            raise PresentationError("generator degrees must be >= 1")
        self.max_degree = int(max_degree) if max_degree is not None else (
            max(self.degrees, default=0))
        n = len(self.names)

        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), expansion in brackets.items():
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise PresentationError(f"bracket indices ({i},{j}) out of range")
            if i == j:
                if _vec(expansion):
                    raise PresentationError(f"[e{i},e{i}] must vanish")
                continue
            vec = _vec(expansion)
            if j < i:
                i, j = j, i
                vec = {k: -c for k, c in vec.items()}
            vec = {k: c for k, c in vec.items()
                   if self.degrees[k] <= self.max_degree}
            if (i, j) in table and table[(i, j)] != vec:
                raise PresentationError(f"conflicting entries for bracket ({i},{j})")
            if vec:
                table[(i, j)] = vec
        self._brackets = table

        self.derivation = None
        if derivation is not None:
            self.derivation = {int(i): _vec(img) for i, img in derivation.items()}
            for i, img in self.derivation.items():
                if not 0 <= i < n or any(not 0 <= k < n for k in img):
                    raise PresentationError(
                        f"derivation entry for index {i} is out of range")

        self.derivation_is_lie: bool | None = None
        if check:
            self.validate(check_derivation=check_derivation)

    # ------------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LiePresentation):
            return NotImplemented
        return (self.names == other.names and self.degrees == other.degrees
                and self._brackets == other._brackets
                and self.derivation == other.derivation
                and self.max_degree == other.max_degree)

    __hash__ = None

    def __repr__(self):
        return f"LiePresentation({len(self.names)} generators, max degree {self.max_degree})"

    # ------------------------------------------------------------------
    def gen_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """[e_i, e_j] as a mapping index -> coefficient."""
        if i == j:
            return {}
        if i < j:
            return self._brackets.get((i, j), {})
        return {k: -c for k, c in self._brackets.get((j, i), {}).items()}

    def lie_bracket_vec(self, u: dict, v: dict) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, cu in u.items():
            for j, cv in v.items():
                out = _vec_add(out, self.gen_bracket(i, j), cu * cv)
        return out

    def monomial_degree(self, mono: tuple) -> int:
        return sum(self.degrees[i] for i in mono)

    def validate(self, check_derivation: bool = True) -> None:
        n = len(self.names)
        for (i, j), vec in self._brackets.items():
            want = self.degrees[i] + self.degrees[j]
            for k in vec:
                if self.degrees[k] != want:
                    raise PresentationError(
                        f"bracket ({i},{j}) is not degree additive: term e{k} has "
                        f"degree {self.degrees[k]}, expected {want}")
        unit = lambda i: {i: Fraction(1)}
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    jac = self.lie_bracket_vec(unit(i), self.gen_bracket(j, k))
                    jac = _vec_add(jac, self.lie_bracket_vec(unit(j), self.gen_bracket(k, i)))
                    jac = _vec_add(jac, self.lie_bracket_vec(unit(k), self.gen_bracket(i, j)))
                    if jac:
                        raise PresentationError(
                            f"Jacobi identity fails on generators ({i},{j},{k})")
        if self.derivation is not None:
            for i, img in self.derivation.items():
                for k in img:
                    if self.degrees[k] != self.degrees[i]:
                        raise PresentationError(
                            f"derivation image of e{i} is not degree preserving")
            ok = True
            bad = None
            for i in range(n):
                for j in range(i + 1, n):
                    lhs: dict[int, Fraction] = {}
                    for k, c in self.gen_bracket(i, j).items():
                        lhs = _vec_add(lhs, self.derivation.get(k, {}), c)
                    rhs = self.lie_bracket_vec(self.derivation.get(i, {}), unit(j))
                    rhs = _vec_add(rhs, self.lie_bracket_vec(unit(i), self.derivation.get(j, {})))
                    if lhs != _vec(rhs):
                        ok = False
                        bad = (i, j)
                        break
                if not ok:
                    break
            self.derivation_is_lie = ok
            if check_derivation and not ok:
                raise PresentationError(
                    f"derivation table violates the Leibniz rule on generators {bad}")

    # element constructors ------------------------------------------------
    def element(self, terms) -> "PBWElement":
        return PBWElement(self, terms)

    def generator(self, i: int) -> "PBWElement":
        return PBWElement(self, {(i,): Fraction(1)})

    def one(self) -> "PBWElement":
        return PBWElement(self, {(): Fraction(1)})

    def zero(self) -> "PBWElement":
        return PBWElement(self)

    def from_lie_vec(self, vec: Mapping[int, Fraction]) -> "PBWElement":
        return PBWElement(self, {(int(i),): as_fraction(c) for i, c in vec.items()})

    def graduation_derivation(self) -> "TableDerivation":
        """The diagonal derivation scaling each generator by its degree."""
        return TableDerivation(
            self, {i: {i: Fraction(d)} for i, d in enumerate(self.degrees)})


class PBWElement(LinearCombination):
    """Enveloping-algebra element: combination of nondecreasing monomials."""

    __slots__ = ("alg",)

    def __init__(self, alg: LiePresentation, terms=()):
        self.alg = alg
        super().__init__(terms)
        n = len(alg.names)
        for mono in self._terms:
            if any(not 0 <= i < n for i in mono):
                raise ValueError(f"monomial {mono} uses indices outside the basis")
            if any(mono[t] > mono[t + 1] for t in range(len(mono) - 1)):
                raise ValueError(f"monomial {mono} is not in normal form")

    def _make(self, terms):
        return PBWElement(self.alg, terms)

    def _same_space(self, other):
        return self.alg is other.alg or self.alg == other.alg

    def _key_degree(self, key):
        return self.alg.monomial_degree(key)

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            return pbw_mul(self, other)
        return super().__mul__(other)

    def one(self) -> "PBWElement":
        return self.alg.one()

    def constant_term(self) -> Fraction:
        return self.coefficient(())

    def is_primitive(self) -> bool:
        """Primitive elements are exactly the combinations of single
        generators (the Lie algebra inside its enveloping algebra)."""
        return all(len(mono) == 1 for mono in self._terms)

    def _mono_str(self, mono):
        return "*".join(self.alg.names[i] for i in mono)

    def __str__(self):
        return core_tensor.format_terms(self, self._mono_str)

    __repr__ = __str__


class PBWElement2(LinearCombination):
    """Combination of pairs of normal-form monomials."""

    __slots__ = ("alg",)

    def __init__(self, alg: LiePresentation, terms=()):
        self.alg = alg
        super().__init__(terms)

    def _make(self, terms):
        return PBWElement2(self.alg, terms)

    def _same_space(self, other):
        return self.alg is other.alg or self.alg == other.alg

    def _key_degree(self, key):
        return self.alg.monomial_degree(key[0]) + self.alg.monomial_degree(key[1])

    def __mul__(self, other):
        # componentwise product, straightening each slot
        if isinstance(other, PBWElement2):
            alg = self.alg
            acc: list = []
            for (p1, q1), c1 in self.items():
                for (p2, q2), c2 in other.items():
                    left = _straighten(alg, p1 + p2)
                    right = _straighten(alg, q1 + q2)
                    for lm, lc in left.items():
                        for rm, rc in right.items():
                            acc.append(((lm, rm), c1 * c2 * lc * rc))
            return PBWElement2(alg, acc)
        return super().__mul__(other)

    def __str__(self):
        name = lambda k: (
            f"{'*'.join(self.alg.names[i] for i in k[0])}|"
            f"{'*'.join(self.alg.names[i] for i in k[1])}")
        return core_tensor.format_terms(self, name)

    __repr__ = __str__


def _straighten(alg: LiePresentation, mono: tuple) -> dict[tuple, Fraction]:
    """Rewrite an arbitrary generator tuple into normal form.

    Each out-of-order adjacent pair e_j e_i (j > i) becomes e_i e_j plus the
    bracket [e_j, e_i]; bracket terms are strictly shorter, so the rewriting
    terminates.
    """
    out: dict[tuple, Fraction] = {}
    stack: list[tuple[tuple, Fraction]] = [(tuple(mono), Fraction(1))]
    while stack:
        m, c = stack.pop()
        for t in range(len(m) - 1):
            if m[t] > m[t + 1]:
                i, j = m[t + 1], m[t]
                stack.append((m[:t] + (i, j) + m[t + 2:], c))
                for k, ck in alg.gen_bracket(j, i).items():
                    stack.append((m[:t] + (k,) + m[t + 2:], c * ck))
                break
        else:
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def pbw_mul(a: PBWElement, b: PBWElement) -> PBWElement:
    """Product in the enveloping algebra: concatenate and straighten."""
    if not a._same_space(b):
        raise ValueError("elements belong to different presentations")
    acc: list = []
    for u, cu in a.items():
        for v, cv in b.items():
            for mono, c in _straighten(a.alg, u + v).items():
                acc.append((mono, cu * cv * c))
    return PBWElement(a.alg, acc)


def pbw_coproduct(a: PBWElement) -> PBWElement2:
    """Coproduct determined by primitivity of the generators; on a
    nondecreasing monomial this is the plain subset expansion, with no
    straightening needed."""
    terms = []
    for mono, c in a.items():
        n = len(mono)
        for mask in range(1 << n):
            left = tuple(mono[t] for t in range(n) if mask >> t & 1)
            right = tuple(mono[t] for t in range(n) if not mask >> t & 1)
            terms.append(((left, right), c))
    return PBWElement2(a.alg, terms)


def pbw_outer(a: PBWElement, b: PBWElement) -> PBWElement2:
    terms = []
    for u, cu in a.items():
        for v, cv in b.items():
            terms.append(((u, v), cu * cv))
    return PBWElement2(a.alg, terms)


def pbw_antipode(a: PBWElement) -> PBWElement:
    """Reverse each monomial with sign (-1)**length, then straighten."""
    acc: list = []
    for mono, c in a.items():
        sign = Fraction(-1) ** len(mono)
        for m, ck in _straighten(a.alg, mono[::-1]).items():
            acc.append((m, c * sign * ck))
    return PBWElement(a.alg, acc)


def pbw_counit(a: PBWElement) -> PBWElement:
    return a.alg.one() * a.constant_term()


def pbw_convolve(f, g, a: PBWElement) -> PBWElement:
    """Convolution of two linear maps, evaluated on ``a``."""
    alg = a.alg
    acc: list = []
    for (left, right), c in pbw_coproduct(a).items():
        prod = f(alg.element({left: Fraction(1)})) * g(alg.element({right: Fraction(1)}))
        acc.extend((k, c * q) for k, q in prod.items())
    return PBWElement(alg, acc)


def pbw_graduation(a: PBWElement) -> PBWElement:
    """The grading map: scale each monomial by its total degree."""
    return PBWElement(a.alg, ((m, c * a.alg.monomial_degree(m)) for m, c in a.items()))


def pbw_dynkin(a: PBWElement) -> PBWElement:
    """Convolution of the antipode with the grading map; multiplies
    degree-n Lie elements by n and maps everything into the Lie algebra."""
    return pbw_convolve(pbw_antipode, pbw_graduation, a)


class TableDerivation:
    """Derivation of the enveloping algebra extending a basis table on the
    Lie algebra through the Leibniz rule."""

    __slots__ = ("alg", "table", "_diag")

    def __init__(self, alg: LiePresentation, table: Mapping | None = None):
        if table is None:
            table = alg.derivation
            if table is None:
                raise PreconditionError("presentation has no derivation table")
        self.alg = alg
        self.table = {int(i): _vec(img) for i, img in table.items()}
        diag: dict[int, Fraction] | None = {}
        for i, img in self.table.items():
            if set(img) <= {i}:
                diag[i] = img.get(i, Fraction(0))
            else:
                diag = None
                break
        self._diag = diag

    def is_diagonal(self) -> bool:
        return self._diag is not None

    def monomial_eigenvalue(self, mono: tuple) -> Fraction:
        if self._diag is None:
            raise PreconditionError("derivation is not diagonal on the basis")
        return sum((self._diag.get(i, Fraction(0)) for i in mono), Fraction(0))

    def __call__(self, a: PBWElement) -> PBWElement:
        if self._diag is not None:
            return PBWElement(
                a.alg, ((m, c * self.monomial_eigenvalue(m)) for m, c in a.items()))
        acc: list = []
        for mono, c in a.items():
            for t in range(len(mono)):
                img = self.table.get(mono[t])
                if not img:
                    continue
                for k, ck in img.items():
                    spliced = mono[:t] + (k,) + mono[t + 1:]
                    for m, cs in _straighten(a.alg, spliced).items():
                        acc.append((m, c * ck * cs))
        return PBWElement(a.alg, acc)

    def inverse_apply(self, a: PBWElement) -> PBWElement:
        """Apply the inverse of a diagonal derivation (divide each monomial
        by its eigenvalue)."""
        terms = []
        for m, c in a.items():
            eig = self.monomial_eigenvalue(m)
            if not eig:
                raise PreconditionError(
                    "derivation not invertible: zero eigenvalue on monomial "
                    f"'{'*'.join(a.alg.names[i] for i in m) or '1'}'")
            terms.append((m, c / eig))
        return PBWElement(a.alg, terms)


def exp_truncated(x, max_degree: int):
    """Truncated exponential sum x^k / k!; ``x`` must have no degree-0 part.

    Works for any carrier with graded truncation and a ``one()`` unit; the
    exponential of a Lie element is group-like up to the truncation.
    """
    if x.homogeneous(0):
        raise PreconditionError("exponential requires a positive-degree element")
    one = x.one()
    out = one
    power = one
    fact = 1
    for k in range(1, max_degree + 1):
        power = (power * x).truncate(max_degree)
        if not power:
            break
        fact *= k
        out = out + power / fact
    return out


def log_truncated(g, max_degree: int):
    """Truncated logarithm of an element with constant term exactly 1."""
    one = g.one()
    if g.homogeneous(0) != one:
        raise PreconditionError("logarithm requires constant term exactly 1")
    u = (g - one).truncate(max_degree)
    out = u * 0
    power = one
    for k in range(1, max_degree + 1):
        power = (power * u).truncate(max_degree)
        if not power:
            break
        out = out + power * Fraction((-1) ** (k + 1), k)
    return out


def is_grouplike(g: PBWElement, max_degree: int) -> bool:
    """True iff ``g`` has constant term 1 and coproduct g(x)g in all total
    degrees up to ``max_degree``."""
    if g.constant_term() != 1:
        return False
    t = g.truncate(max_degree)
    return (pbw_coproduct(t).truncate(max_degree)
            == pbw_outer(t, t).truncate(max_degree))


def ad_power(l: PBWElement, k: int, x: PBWElement, max_degree: int | None = None):
    """Iterated commutator: apply y -> [l, y] to ``x`` k times."""
    if k < 0:
        raise PreconditionError(f"power must be >= 0, got {k}")
    out = x
    for _ in range(k):
        out = l * out - out * l
        if max_degree is not None:
            out = out.truncate(max_degree)
    return out


# ---------------------------------------------------------------------------
# stock presentations


def witt_presentation(max_degree: int, derivation: str = "graduation") -> LiePresentation:
    """Basis e_1 .. e_N of degrees 1 .. N with [e_n, e_m] = (m - n) e_{n+m},
    dropped above the bound; the commutator table of the polynomial vector
    fields x^(n+1) d/dx.

    ``derivation`` selects the diagonal table: "graduation" scales e_n by n;
    "shifted" scales e_n by n + 1, which matches the action P(x) d/dx ->
    x P'(x) d/dx on the coefficient polynomial x^(n+1) but is not a
    derivation of the bracket (the Leibniz check is skipped and
    ``derivation_is_lie`` is False).
    """
    basis = [(f"e{n}", n) for n in range(1, max_degree + 1)]
    brackets = {}
    for i in range(max_degree):
        for j in range(i + 1, max_degree):
            n, m = i + 1, j + 1
            if n + m <= max_degree:
                brackets[(i, j)] = {n + m - 1: Fraction(m - n)}
    if derivation == "graduation":
        table = {i: {i: Fraction(i + 1)} for i in range(max_degree)}
        check_derivation = True
    elif derivation == "shifted":
        table = {i: {i: Fraction(i + 2)} for i in range(max_degree)}
        check_derivation = False
    else:
        raise PreconditionError(f"unknown derivation convention {derivation!r}")
    return LiePresentation(basis, brackets, derivation=table,
                           max_degree=max_degree,
                           check_derivation=check_derivation)


def free_lie_presentation(alphabet_size: int, max_degree: int):
    """Presentation of the free Lie algebra on the given alphabet (nilpotent
    quotient at ``max_degree``) in the Lyndon-bracketing basis.

    Returns the presentation together with the list of bracketings (word
    algebra elements) realizing each basis generator.
    """
    words: list = []
    for n in range(1, max_degree + 1):
        words.extend(core_tensor.lyndon_words(alphabet_size, n))
    bracketings = [core_tensor.lyndon_bracketing(w) for w in words]
    degrees = [len(w) for w in words]
    by_degree: dict[int, list[int]] = {}
    for idx, d in enumerate(degrees):
        by_degree.setdefault(d, []).append(idx)

    def coords(elt: core_tensor.TensorElt, degree: int) -> dict[int, Fraction]:
        idxs = by_degree.get(degree, [])
        basis_vecs = [dict(bracketings[i].items()) for i in idxs]
        sol = linalg.solve_in_basis(basis_vecs, dict(elt.items()))
        return {idxs[t]: c for t, c in enumerate(sol) if c}

    brackets = {}
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            d = degrees[i] + degrees[j]
            if d > max_degree:
                continue
            lie = core_tensor.bracket(bracketings[i], bracketings[j])
            if lie:
                brackets[(i, j)] = coords(lie, d)
    basis = [(core_tensor.word_to_str(w), len(w)) for w in words]
    pres = LiePresentation(basis, brackets, max_degree=max_degree)
    return pres, bracketings


# ---------------------------------------------------------------------------
# presentation files

def _parse_bracket_line(line: str, n: int):
    head, _, tail = line.partition("->")
    try:
        i, j = (int(tok) for tok in head.split())
    except ValueError:
        raise PresentationError(f"malformed bracket entry {line!r}") from None
    vec: dict[int, Fraction] = {}
    tail = tail.strip()
    if tail:
        for piece in tail.split(";"):
            toks = piece.split()
            if len(toks) != 2:
                raise PresentationError(f"malformed bracket term {piece!r}")
            try:
                coeff, k = Fraction(toks[0]), int(toks[1])
            except (ValueError, ZeroDivisionError):
                raise PresentationError(f"malformed bracket term {piece!r}") from None
            if not 0 <= k < n:
                raise PresentationError(f"bracket term index {k} out of range")
            vec[k] = vec.get(k, Fraction(0)) + coeff
    return (i, j), vec


def presentation_from_json(data, check: bool = True,
                           check_derivation: bool = True) -> LiePresentation:
    """Load a presentation from a JSON object (or JSON text, or a file path).

    Schema::

        {"max_degree": 6,
         "basis": [["e1", 1], ["e2", 2], ...],
         "brackets": ["0 1 -> 1 2", "0 2 -> 2 3; -1/2 1", ...],
         "derivation": ["1", "2", ...]}        # optional diagonal, "p/q" each

    Indices are 0-based positions into ``basis``.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError:
            with open(data, encoding="utf-8") as fh:
                data = json.load(fh)
    basis = [(str(name), int(deg)) for name, deg in data["basis"]]
    brackets = {}
    for line in data.get("brackets", []):
        key, vec = _parse_bracket_line(line, len(basis))
        brackets[key] = vec
    derivation = None
    if "derivation" in data and data["derivation"] is not None:
        diag = [Fraction(str(c)) for c in data["derivation"]]
        if len(diag) != len(basis):
            raise PresentationError("derivation diagonal must match the basis size")
        derivation = {i: ({i: c} if c else {}) for i, c in enumerate(diag)}
    return LiePresentation(basis, brackets, derivation=derivation,
                           max_degree=data.get("max_degree"),
                           check=check, check_derivation=check_derivation)


def presentation_to_json(pres: LiePresentation) -> dict:
    """Serialize a presentation back to the JSON schema above.

    Only diagonal derivation tables are representable in the file format.
    """
    out = {
        "max_degree": pres.max_degree,
        "basis": [[name, deg] for name, deg in zip(pres.names, pres.degrees)],
        "brackets": [
            f"{i} {j} -> " + "; ".join(
                f"{format_fraction(c)} {k}" for k, c in sorted(vec.items()))
            for (i, j), vec in sorted(pres._brackets.items())
        ],
    }
    if pres.derivation is not None:
        diag = []
        for i in range(len(pres.names)):
            img = pres.derivation.get(i, {})
            if set(img) - {i}:
                raise ValueError("only diagonal derivations are serializable")
            diag.append(format_fraction(img.get(i, Fraction(0))))
        out["derivation"] = diag
    return out
