import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcsgrammar.freegroup import (ONE, Atom, Phon, Word, conjugate, cyclic_permutations,
                                  cyclic_reduce, invert, is_cyclic_permutation,
                                  is_cyclically_reduced, multiply, parse_word,
                                  phon_word, reduce)
from gcsgrammar.term import Constant

from .conftest import raw_words, words

a, b, c = (Atom(Constant(x)) for x in "abc")


def w(text):
    return parse_word(text)


def test_reduce_examples():
    assert reduce([a, a.inverse()]) == ONE
    assert reduce([a, b, b.inverse(), c]) == w("a c")
    assert str(w("c^-1 c^-1 a^-1 c^-1 c a c b^-1 c^-1 c b a a c^-1")) == "c^-1 a a c^-1"


def test_word_rejects_unreduced():
    with pytest.raises(ValueError):
        Word((a, a.inverse()))


def test_multiply_cancels_at_the_seam():
    assert multiply(w("a b"), w("b^-1 c")) == w("a c")
    assert w("a b") * w("b^-1 a^-1") == ONE


def test_invert_and_conjugate():
    assert invert(w("a b^-1")) == w("b a^-1")
    assert ~ONE == ONE
    assert conjugate(w("a c b^-1"), w("c")) == w("c a c b^-1 c^-1")
    assert conjugate(w("a"), w("a")) == w("a")


def test_cyclic_reduce_examples():
    core, u = cyclic_reduce(w("c a b c^-1"))
    assert core == w("a b") and u == w("c")
    assert cyclic_reduce(ONE) == (ONE, ONE)


def test_cyclic_permutations():
    assert cyclic_permutations(w("a b c")) == [w("a b c"), w("b c a"), w("c a b")]
    assert cyclic_permutations(ONE) == [ONE]
    with pytest.raises(ValueError):
        cyclic_permutations(w("a b a^-1"))


def test_phonological_atoms():
    ws = phon_word(["john", "saw"], -1)
    assert str(ws) == '"john"^-1 "saw"^-1'
    assert parse_word('j "john"^-1').atoms[1] == Atom(Phon("john"), -1)
    with pytest.raises(ValueError):
        Phon("two words")


def test_parse_word_rejects_meta_variables():
    with pytest.raises(ValueError):
        parse_word("s(A,b)")


@given(words(), words(), words())
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(words())
def test_identity_and_inverse(x):
    assert x * ONE == x == ONE * x
    assert x * ~x == ONE == ~x * x
    assert ~~x == x


@given(words(), words())
def test_inverse_of_product(x, y):
    assert ~(x * y) == ~y * ~x


@given(raw_words(16))
def test_reduce_idempotent(raw):
    r = reduce(raw)
    assert reduce(r.atoms) == r


@given(raw_words(16), st.randoms(use_true_random=False))
def test_reduce_confluent(raw, rnd):
    # cancel adjacent pairs in random order until none is left
    seq = list(raw)
    while True:
        spots = [i for i in range(len(seq) - 1) if seq[i] == seq[i + 1].inverse()]
        if not spots:
            break
        i = rnd.choice(spots)
        del seq[i:i + 2]
    assert tuple(seq) == reduce(raw).atoms


@given(words(12))
def test_cyclic_reduce_conjugacy(x):
    core, u = cyclic_reduce(x)
    assert is_cyclically_reduced(core)
    assert conjugate(core, u) == x


@given(words(8))
def test_cyclic_permutations_are_conjugates(x):
    core, _u = cyclic_reduce(x)
    for p in cyclic_permutations(core):
        assert is_cyclic_permutation(p, core)
        k = next(i for i in range(max(1, len(core))) if Word(core.atoms[i:] + core.atoms[:i]) == p)
        head = Word(core.atoms[:k])
        assert conjugate(core, ~head) == p


@given(words(10))
def test_text_round_trip(x):
    assert parse_word(str(x)) == x


def test_random_words_round_trip_with_terms():
    rnd = random.Random(3)
    gens = ["i(s(j,l),p)", '"paris"', "ev(m,$x,r($x))", "t(m)"]
    for _ in range(50):
        text = " ".join(rnd.choice(gens) + rnd.choice(["", "^-1"]) for _ in range(5))
        x = parse_word(text)
        assert parse_word(str(x)) == x
