"""Enveloping algebras: normal form, Hopf structure, stock presentations."""

import json
import random
from fractions import Fraction

import pytest

from logderiv import core_tensor as ct
from logderiv import enveloping as env
from logderiv.dynkin import LetterDerivation, dynkin_convolution
from logderiv.errors import PreconditionError, PresentationError


@pytest.fixture(scope="module")
def witt():
    return env.witt_presentation(6)


def gens(alg, *idx):
    return tuple(alg.generator(i) for i in idx)


# ---------------------------------------------------------------------------
# structure constants and normal form

def test_witt_bracket_table(witt):
    # [e_n, e_m] = (m - n) e_{n+m}, dropped above the bound
    e1, e2, e3 = gens(witt, 0, 1, 2)
    assert e1 * e2 - e2 * e1 == witt.generator(2)
    assert e1 * e3 - e3 * e1 == witt.generator(3) * 2
    assert e2 * e3 - e3 * e2 == witt.generator(4)
    e4, e5 = gens(witt, 3, 4)
    assert e4 * e5 - e5 * e4 == witt.zero()  # degree 9 > 6, dropped


def test_pbw_mul_examples(witt):
    e1, e2, e3 = gens(witt, 0, 1, 2)
    assert e2 * e1 == e1 * e2 - e3
    assert e1 * e1 == env.PBWElement(witt, {(0, 0): 1})
    assert witt.one() * e3 == e3


def test_pbw_normal_form_enforced(witt):
    with pytest.raises(ValueError):
        env.PBWElement(witt, {(1, 0): 1})
    with pytest.raises(ValueError):
        env.PBWElement(witt, {(99,): 1})


def test_presentation_rejects_out_of_range_derivation():
    with pytest.raises(PresentationError):
        env.LiePresentation([("x", 1)], {}, derivation={3: {3: 1}})


def _straighten_last_descent(alg, mono):
    """Alternative normal-form rewriting that always resolves the LAST
    out-of-order pair; confluence means it must agree with the library's
    first-descent strategy."""
    out = {}
    stack = [(tuple(mono), Fraction(1))]
    while stack:
        m, c = stack.pop()
        descents = [t for t in range(len(m) - 1) if m[t] > m[t + 1]]
        if not descents:
            out[m] = out.get(m, Fraction(0)) + c
            continue
        t = descents[-1]
        i, j = m[t + 1], m[t]
        stack.append((m[:t] + (i, j) + m[t + 2:], c))
        for k, ck in alg.gen_bracket(j, i).items():
            stack.append((m[:t] + (k,) + m[t + 2:], c * ck))
    return {k: v for k, v in out.items() if v}


def test_straightening_confluent(witt):
    rng = random.Random(9)
    for _ in range(40):
        mono = tuple(rng.randrange(4) for _ in range(rng.randint(2, 5)))
        first = env._straighten(witt, mono)
        last = _straighten_last_descent(witt, mono)
        assert first == last


def test_pbw_mul_associative_random(witt):
    rng = random.Random(7)
    monos = [(0,), (1,), (0, 1), (0, 0, 1), (2,), (0, 2)]
    for _ in range(25):
        a, b, c = (
            env.PBWElement(
                witt,
                [(rng.choice(monos), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
                 for _ in range(2)])
            for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_pbw_coproduct_examples(witt):
    e1, e2 = gens(witt, 0, 1)
    assert env.pbw_coproduct(e1) == env.pbw_outer(e1, witt.one()) + env.pbw_outer(witt.one(), e1)
    d = env.pbw_coproduct(e1 * e2)
    expected = (env.pbw_outer(e1 * e2, witt.one())
                + env.pbw_outer(e1, e2)
                + env.pbw_outer(e2, e1)
                + env.pbw_outer(witt.one(), e1 * e2))
    assert d == expected
    assert env.pbw_coproduct(witt.one()) == env.pbw_outer(witt.one(), witt.one())


def test_pbw_antipode_examples(witt):
    e1, e2, e3 = gens(witt, 0, 1, 2)
    assert env.pbw_antipode(e1) == -e1
    assert env.pbw_antipode(witt.one()) == witt.one()
    # reversal of e1 e2 straightens through [e2, e1] = -e3
    assert env.pbw_antipode(e1 * e2) == e1 * e2 - e3
    # the antipode axiom pins the sign: S*Id must annihilate e1 e2
    assert env.pbw_convolve(env.pbw_antipode, lambda x: x, e1 * e2) == witt.zero()


def test_exp_log_examples(witt):
    e1, e2 = gens(witt, 0, 1)
    e = env.exp_truncated(e1, 3)
    expected = (witt.one() + e1 + env.PBWElement(witt, {(0, 0): Fraction(1, 2)})
                + env.PBWElement(witt, {(0, 0, 0): Fraction(1, 6)}))
    assert e == expected
    assert env.log_truncated(env.exp_truncated(e1 + e2, 4), 4) == e1 + e2
    assert env.pbw_coproduct(e).truncate(3) == (
        env.pbw_outer(e, e)).truncate(3)


def test_exp_log_preconditions(witt):
    with pytest.raises(PreconditionError):
        env.exp_truncated(witt.one(), 3)
    with pytest.raises(PreconditionError):
        env.log_truncated(witt.generator(0), 3)


def test_is_grouplike_examples(witt):
    e1 = witt.generator(0)
    assert env.is_grouplike(env.exp_truncated(e1, 4), 4)
    assert not env.is_grouplike(witt.one() + e1 * e1, 4)
    assert env.is_grouplike(witt.one(), 4)


def test_ad_power_examples(witt):
    e1, e2 = gens(witt, 0, 1)
    x = e1 + e2
    assert env.ad_power(e1, 0, x) == x
    assert env.ad_power(e1, 1, e2) == witt.generator(2)
    assert env.ad_power(e1, 2, e1) == witt.zero()
    with pytest.raises(PreconditionError):
        env.ad_power(e1, -1, e2)


# ---------------------------------------------------------------------------
# Hopf axioms on the Witt enveloping algebra

def all_pbw_monomials(alg, max_degree):
    out = [()]

    def grow(prefix, start, left):
        for i in range(start, len(alg.degrees)):
            d = alg.degrees[i]
            if d <= left:
                out.append(tuple(prefix + [i]))
                grow(prefix + [i], i, left - d)

    grow([], 0, max_degree)
    return out


def test_hopf_axioms_witt_degree_6(witt):
    nu = env.pbw_counit
    ident = lambda x: x
    for mono in all_pbw_monomials(witt, 6):
        u = env.PBWElement(witt, {mono: 1})
        # coassociativity via the two iterated coproducts
        left = {}
        right = {}
        for (p, q), c in env.pbw_coproduct(u).items():
            for (r, s), c2 in env.pbw_coproduct(env.PBWElement(witt, {p: 1})).items():
                left[(r, s, q)] = left.get((r, s, q), 0) + c * c2
            for (r, s), c2 in env.pbw_coproduct(env.PBWElement(witt, {q: 1})).items():
                right[(p, r, s)] = right.get((p, r, s), 0) + c * c2
        assert {k: c for k, c in left.items() if c} == {k: c for k, c in right.items() if c}
        # antipode axiom both ways
        expected = witt.one() if not mono else witt.zero()
        assert env.pbw_convolve(env.pbw_antipode, ident, u) == expected
        assert env.pbw_convolve(ident, env.pbw_antipode, u) == expected
        assert nu(u) == expected


def test_coproduct_multiplicative_witt(witt):
    rng = random.Random(8)
    monos = all_pbw_monomials(witt, 3)
    for _ in range(20):
        a = env.PBWElement(witt, {rng.choice(monos): Fraction(rng.randint(-2, 2))})
        b = env.PBWElement(witt, {rng.choice(monos): Fraction(rng.randint(-2, 2))})
        assert env.pbw_coproduct(a * b) == env.pbw_coproduct(a) * env.pbw_coproduct(b)


def test_antipode_inverts_grouplikes(witt):
    g = env.exp_truncated(witt.generator(0) + witt.generator(1), 6)
    assert (env.pbw_antipode(g) * g).truncate(6) == witt.one()


# ---------------------------------------------------------------------------
# presentations: validation, derivations, files

def test_presentation_rejects_bad_jacobi():
    # [e1,e2] = e3 with [e1,e3] = e1 breaks both grading and Jacobi
    with pytest.raises(PresentationError):
        env.LiePresentation(
            [("x", 1), ("y", 1), ("z", 2)],
            {(0, 1): {2: 1}, (0, 2): {0: 1}},
        )


def test_presentation_rejects_degree_mismatch():
    with pytest.raises(PresentationError):
        env.LiePresentation(
            [("x", 1), ("y", 1), ("z", 1)],
            {(0, 1): {2: 1}},  # degree 2 bracket landing on a degree-1 generator
            max_degree=3,
        )


def test_heisenberg_presentation_valid():
    h = env.LiePresentation(
        [("x", 1), ("y", 1), ("z", 2)],
        {(0, 1): {2: 1}},
        max_degree=4,
    )
    x, y, z = gens(h, 0, 1, 2)
    assert x * y - y * x == z
    assert (x * z) == z * x  # z is central


def test_derivation_leibniz_check():
    # scaling x by 1 and y by 2 forces z to scale by 3; 5 breaks Leibniz
    env.LiePresentation(
        [("x", 1), ("y", 1), ("z", 2)], {(0, 1): {2: 1}},
        derivation={0: {0: 1}, 1: {1: 2}, 2: {2: 3}}, max_degree=4)
    with pytest.raises(PresentationError):
        env.LiePresentation(
            [("x", 1), ("y", 1), ("z", 2)], {(0, 1): {2: 1}},
            derivation={0: {0: 1}, 1: {1: 2}, 2: {2: 5}}, max_degree=4)


def test_witt_derivation_conventions():
    grad = env.witt_presentation(5, derivation="graduation")
    assert grad.derivation_is_lie is True
    d = env.TableDerivation(grad)
    assert d(grad.generator(2)) == grad.generator(2) * 3

    shifted = env.witt_presentation(5, derivation="shifted")
    assert shifted.derivation_is_lie is False  # eigenvalue n+1 is not additive
    d2 = env.TableDerivation(shifted)
    assert d2(shifted.generator(2)) == shifted.generator(2) * 4
    with pytest.raises(PreconditionError):
        env.witt_presentation(5, derivation="nonsense")


def test_table_derivation_general_and_inverse(witt):
    d = witt.graduation_derivation()
    e1, e2 = gens(witt, 0, 1)
    assert d(e1 * e2) == e1 * e2 * 3
    assert d.inverse_apply(e1 * e2 * 3) == e1 * e2
    zero_on_first = env.TableDerivation(witt, {0: {}, 1: {1: 2}})
    with pytest.raises(PreconditionError):
        zero_on_first.inverse_apply(e1)
    # non-diagonal table applies through Leibniz with straightening
    swap = env.TableDerivation(witt, {0: {0: 1}, 1: {1: 1}, 2: {2: 1}})
    assert swap(e2 * e2) == e2 * e2 * 2


def test_presentation_file_round_trip(tmp_path, witt):
    data = env.presentation_to_json(witt)
    text = json.dumps(data)
    loaded = env.presentation_from_json(text)
    assert loaded == witt
    path = tmp_path / "witt.json"
    path.write_text(text, encoding="utf-8")
    loaded2 = env.presentation_from_json(str(path))
    assert loaded2 == witt
    e1, e2 = loaded2.generator(0), loaded2.generator(1)
    assert e2 * e1 == e1 * e2 - loaded2.generator(2)


def test_presentation_file_rational_coefficients():
    pres = env.presentation_from_json(json.dumps({
        "max_degree": 4,
        "basis": [["u", 1], ["v", 1], ["w", 2]],
        "brackets": ["0 1 -> 1/2 2"],
        "derivation": ["1", "1", "2"],
    }))
    u, v = pres.generator(0), pres.generator(1)
    assert u * v - v * u == pres.generator(2) / 2
    assert pres.derivation_is_lie is True


def test_presentation_file_errors():
    with pytest.raises(PresentationError):
        env.presentation_from_json(json.dumps({
            "basis": [["u", 1]], "brackets": ["0 0 ->"], "derivation": ["1", "2"]}))
    with pytest.raises(PresentationError):
        env.presentation_from_json(json.dumps({
            "basis": [["u", 1], ["v", 1]], "brackets": ["0 1 -> bad 0"]}))


# ---------------------------------------------------------------------------
# the word algebra is the enveloping algebra of the free Lie algebra

def test_tensor_algebra_correspondence_degree_4():
    pres, bracketings = env.free_lie_presentation(2, 4)

    def embed_word(word):
        out = pres.one()
        for letter in word:
            out = out * pres.generator(letter)
        return out

    def to_tensor(elt):
        out = ct.ZERO
        for mono, c in elt.items():
            prod = ct.ONE
            for i in mono:
                prod = prod * bracketings[i]
            out = out + prod * c
        return out

    Y = LetterDerivation.graduation()
    import itertools
    for n in range(0, 5):
        for word in itertools.product(range(2), repeat=n):
            lhs = dynkin_convolution(Y, tuple(word))
            rhs = env.pbw_dynkin(embed_word(word))
            assert to_tensor(rhs) == lhs
