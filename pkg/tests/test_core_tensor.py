"""Word-algebra Hopf structure: frozen examples and structural properties."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logderiv import core_tensor as ct
from logderiv.errors import PreconditionError
from logderiv.linalg import rank

A = ct.letter_elt(0)
B = ct.letter_elt(1)
C = ct.letter_elt(2)


def w(text):
    return ct.word_from_str(text)


def elt(text):
    return ct.word_elt(w(text))


def all_words(alphabet_size, max_len):
    out = [()]
    for n in range(1, max_len + 1):
        out.extend(tuple(t) for t in itertools.product(range(alphabet_size), repeat=n))
    return out


# ---------------------------------------------------------------------------
# independent oracles

def oracle_unshuffle(word):
    """Subset enumeration via itertools.combinations, independent of the
    bitmask implementation."""
    n = len(word)
    terms = {}
    for p in range(n + 1):
        for subset in itertools.combinations(range(n), p):
            left = tuple(word[i] for i in subset)
            rest = tuple(word[i] for i in range(n) if i not in subset)
            key = (left, rest)
            terms[key] = terms.get(key, 0) + 1
    return ct.TensorElt2(terms.items())


def oracle_is_lyndon(word):
    rotations = [word[i:] + word[:i] for i in range(1, len(word))]
    return len(word) > 0 and all(word < r for r in rotations)


# ---------------------------------------------------------------------------
# operations, spec examples frozen

def test_concat_examples():
    assert A * B == elt("ab")
    assert ct.ONE * (elt("ab") - elt("ba")) == elt("ab") - elt("ba")
    assert (A + B / 2) * B == elt("ab") + elt("bb") / 2


def test_concat_degree_additive():
    prod = elt("ab") * elt("bab")
    assert prod.degrees() == [5]


def test_unshuffle_examples():
    assert ct.unshuffle(()) == ct.TensorElt2({((), ()): 1})
    assert ct.unshuffle(w("a")) == ct.TensorElt2({(w("a"), ()): 1, ((), w("a")): 1})
    expected = ct.TensorElt2({
        (w("ab"), ()): 1,
        (w("a"), w("b")): 1,
        (w("b"), w("a")): 1,
        ((), w("ab")): 1,
    })
    assert ct.unshuffle(w("ab")) == expected


def test_unshuffle_matches_subset_oracle():
    for word in all_words(2, 5):
        assert ct.unshuffle(word) == oracle_unshuffle(word)


def test_antipode_examples():
    assert ct.antipode(elt("ab")) == elt("ba")
    assert ct.antipode(elt("abc")) == -elt("cba")
    x = elt("ab") - elt("ba")
    assert ct.antipode(x) == -x


def test_convolve_examples():
    s, ident, nu = ct.antipode_endo(), ct.identity_endo(), ct.counit_endo()
    assert ct.convolve(s, ident).on_word(w("ab")) == ct.ZERO
    assert ct.convolve(nu, ident).on_word(w("ab")) == elt("ab")
    grading = ct.GradedEndo(lambda word: ct.word_elt(word) * len(word))
    assert ct.convolve(s, grading).on_word(w("ab")) == elt("ab") - elt("ba")


def test_bracket_examples():
    assert ct.bracket(A, B) == elt("ab") - elt("ba")
    assert ct.bracket(A, A) == ct.ZERO
    expected = elt("abc") - elt("bac") - elt("cab") + elt("cba")
    assert ct.bracket(ct.bracket(A, B), C) == expected


def test_lyndon_words_examples():
    assert ct.lyndon_words(2, 1) == [w("a"), w("b")]
    assert ct.lyndon_words(2, 2) == [w("ab")]
    assert ct.lyndon_words(2, 3) == [w("aab"), w("abb")]
    with pytest.raises(PreconditionError):
        ct.lyndon_words(2, 0)


@pytest.mark.parametrize("alphabet,max_len", [(2, 6), (3, 4)])
def test_lyndon_words_against_rotation_oracle(alphabet, max_len):
    for n in range(1, max_len + 1):
        brute = [word for word in itertools.product(range(alphabet), repeat=n)
                 if oracle_is_lyndon(word)]
        assert ct.lyndon_words(alphabet, n) == brute


def test_lyndon_bracketing_examples():
    assert ct.lyndon_bracketing(w("a")) == A
    assert ct.lyndon_bracketing(w("ab")) == ct.bracket(A, B)
    assert ct.lyndon_bracketing(w("aab")) == ct.bracket(A, ct.bracket(A, B))
    with pytest.raises(PreconditionError):
        ct.lyndon_bracketing(w("ba"))
    with pytest.raises(PreconditionError):
        ct.lyndon_bracketing(w("aa"))


def test_is_primitive_examples():
    assert ct.is_primitive(elt("ab") - elt("ba"))
    assert not ct.is_primitive(elt("ab"))
    assert ct.is_primitive(ct.ZERO)


def test_is_grouplike():
    from logderiv.enveloping import exp_truncated
    g = exp_truncated(ct.bracket(A, B) + A, 5)
    assert ct.is_grouplike(g, 5)
    assert not ct.is_grouplike(ct.ONE + elt("ab"), 5)
    assert ct.is_grouplike(ct.ONE, 5)


# ---------------------------------------------------------------------------
# invariants

def triple_coproducts(word):
    left = {}
    right = {}
    for (u, v), c in ct.unshuffle(word).items():
        for (p, q), c2 in ct.unshuffle(u).items():
            left[(p, q, v)] = left.get((p, q, v), 0) + c * c2
        for (p, q), c2 in ct.unshuffle(v).items():
            right[(u, p, q)] = right.get((u, p, q), 0) + c * c2
    prune = lambda d: {k: c for k, c in d.items() if c}
    return prune(left), prune(right)


def test_coassociativity_to_degree_6():
    for word in all_words(2, 6):
        lhs, rhs = triple_coproducts(word)
        assert lhs == rhs


def test_coproduct_is_algebra_morphism():
    rng = random.Random(1)
    words = all_words(2, 5)
    for _ in range(40):
        u = ct.word_elt(rng.choice(words))
        v = ct.word_elt(rng.choice(words))
        if len(next(iter(u.keys()))) + len(next(iter(v.keys()))) > 5:
            continue
        assert ct.coproduct(u * v) == ct.coproduct(u) * ct.coproduct(v)


def test_antipode_axiom_and_involution():
    s, ident, nu = ct.antipode_endo(), ct.identity_endo(), ct.counit_endo()
    left = ct.convolve(s, ident)
    right = ct.convolve(ident, s)
    for word in all_words(2, 6):
        expected = ct.ONE if not word else ct.ZERO
        assert left.on_word(word) == expected
        assert right.on_word(word) == expected
        # cocommutativity and its consequence S o S = Id
        assert ct.unshuffle(word).swap() == ct.unshuffle(word)
        assert ct.antipode(ct.antipode(ct.word_elt(word))) == ct.word_elt(word)


def test_convolution_associative_and_neutral():
    rng = random.Random(2)
    pool = all_words(2, 4)

    def random_endo():
        # arbitrary linear map: each word gets a memoized random image,
        # possibly degree-shifting
        images = {}

        def fn(word):
            if word not in images:
                images[word] = ct.TensorElt(
                    (rng.choice(pool), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
                    for _ in range(rng.randint(0, 2)))
            return images[word]

        return ct.GradedEndo(fn)

    nu = ct.counit_endo()
    words = all_words(2, 4)
    for _ in range(8):
        f, g, h = random_endo(), random_endo(), random_endo()
        for word in words:
            assert (ct.convolve(ct.convolve(f, g), h).on_word(word)
                    == ct.convolve(f, ct.convolve(g, h)).on_word(word))
            assert ct.convolve(nu, f).on_word(word) == f.on_word(word)
            assert ct.convolve(f, nu).on_word(word) == f.on_word(word)


def test_lyndon_bracketings_primitive_and_independent():
    for alphabet in (2, 3):
        for n in range(1, 6 if alphabet == 2 else 5):
            basis = [ct.lyndon_bracketing(word)
                     for word in ct.lyndon_words(alphabet, n)]
            assert all(b.is_primitive() for b in basis)
            assert rank([dict(b.items()) for b in basis]) == len(basis)


# ---------------------------------------------------------------------------
# hypothesis properties

words_strategy = st.lists(st.integers(0, 1), max_size=5).map(tuple)


@given(words_strategy, words_strategy)
@settings(max_examples=60, deadline=None)
def test_antipode_antiautomorphism(u, v):
    lhs = ct.antipode(ct.word_elt(u) * ct.word_elt(v))
    rhs = ct.antipode(ct.word_elt(v)) * ct.antipode(ct.word_elt(u))
    assert lhs == rhs


@given(words_strategy, words_strategy, words_strategy)
@settings(max_examples=60, deadline=None)
def test_concat_associative(u, v, x):
    eu, ev, ex = map(ct.word_elt, (u, v, x))
    assert (eu * ev) * ex == eu * (ev * ex)


def test_graded_endo_sum_and_composition():
    ident = ct.identity_endo()
    s = ct.antipode_endo()
    doubled = ident + ident
    assert doubled(elt("ab")) == elt("ab") * 2
    assert s.compose(s)(elt("abc") - A) == elt("abc") - A
    # composition applies the inner map first
    grading = ct.GradedEndo(lambda word: ct.word_elt(word) * len(word), shift=0)
    assert grading.shift == 0
    assert s.compose(grading)(elt("ab")) == elt("ba") * 2
    assert grading.compose(s)(elt("ab")) == elt("ba") * 2
    assert ident.convolve(s).on_word(w("ab")) == ct.ZERO


def test_graded_endo_cache_transparent():
    calls = []

    def fn(word):
        calls.append(word)
        return ct.word_elt(word) * 2

    endo = ct.GradedEndo(fn)
    first = endo(elt("ab") + A)
    second = endo(elt("ab") + A)
    assert first == second == elt("ab") * 2 + A * 2
    assert calls.count(w("ab")) == 1
