import hypothesis.strategies as st
import pytest
from hypothesis import settings

from gcsgrammar.engine import Computation, Group, QuasiRelator
from gcsgrammar.freegroup import Atom, Word, is_cyclically_reduced, reduce
from gcsgrammar.lexicon import (Grammar, MultiRelatorScheme, RelatorScheme,
                                SchemeAtom, load_grammar)
from gcsgrammar.term import Constant

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

LETTERS = [Constant(x) for x in "abc"]


def atoms(letters=LETTERS):
    return st.builds(Atom, st.sampled_from(letters), st.sampled_from([1, -1]))


def raw_words(max_size=10, letters=LETTERS):
    return st.lists(atoms(letters), max_size=max_size)


def words(max_size=10, letters=LETTERS):
    return raw_words(max_size, letters).map(reduce)


def cyclic_words(min_size=1, max_size=6, letters=LETTERS):
    return (raw_words(max_size, letters).map(reduce)
            .filter(lambda w: len(w) >= min_size and is_cyclically_reduced(w)))


def ground_grammar(relators) -> Grammar:
    schemes = tuple(MultiRelatorScheme((RelatorScheme(tuple(SchemeAtom(a.generator, a.sign) for a in r)),))
                    for r in relators)
    return Grammar(phon=frozenset(), schemes=schemes)


@st.composite
def small_grammars(draw, max_relators=3, max_len=3):
    rels = draw(st.lists(cyclic_words(1, max_len), min_size=1, max_size=max_relators, unique=True))
    return ground_grammar(rels)


@st.composite
def computations(draw, max_steps=4, max_conj=3):
    """A random ground grammar with a random computation over it."""
    g = draw(small_grammars())
    n = draw(st.integers(0, max_steps))
    steps, groups = [], []
    for i in range(n):
        si = draw(st.integers(0, len(g.schemes) - 1))
        part = g.schemes[si].parts[0]
        inst = Word(tuple(Atom(a.label, a.sign) for a in part.atoms))
        u = draw(words(max_conj))
        groups.append(Group(si, {}))
        steps.append(QuasiRelator(si, 0, i, inst, u))
    return g, Computation(tuple(steps), tuple(groups))


@pytest.fixture(scope="session")
def g_grammar():
    return load_grammar("g-grammar")


@pytest.fixture(scope="session")
def g_prime():
    return load_grammar("g-grammar-prime")


@pytest.fixture(scope="session")
def abc():
    return load_grammar("abc")


@pytest.fixture(scope="session")
def preorder():
    return load_grammar("preorder")


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
