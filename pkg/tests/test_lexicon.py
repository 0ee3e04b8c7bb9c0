import pytest
from hypothesis import given

from gcsgrammar.engine import symmetrize
from gcsgrammar.freegroup import is_cyclically_reduced, parse_word
from gcsgrammar.lexicon import (FIXTURES, AcceptorPattern, GrammarError,
                                InstantiationError, accepts, binders_of,
                                instantiate, load_grammar, parse_grammar,
                                print_grammar)
from gcsgrammar.term import Abstraction, Compound, Constant, HOLE, Identifier, parse_term

from .conftest import small_grammars


def test_fixture_shapes(g_grammar, g_prime):
    assert len(g_grammar.schemes) == 9
    assert all(len(s.parts) == 1 for s in g_grammar.schemes)
    assert [len(s.parts) for s in g_prime.schemes] == [1] * 9 + [2] * 3
    assert "every" in g_prime.phon and "every" not in g_grammar.phon


@pytest.mark.parametrize("name", FIXTURES)
def test_print_parse_round_trip(name):
    g = load_grammar(name)
    again = parse_grammar(print_grammar(g), name=g.name)
    assert again == g


@pytest.mark.parametrize("text, fragment", [
    ('relator: a "x"^-1', "undeclared"),
    ("relator: a a^-1 b", "cyclically reduced"),
    ("relator: a b a^-1", "cyclically reduced"),
    ("multi: ev(N,Y,P[X]) P[X]^-1", "not shared"),
    ("rule: a", "unknown keyword"),
    ("relator: s(a", "line 1"),
    ("phon: ok\nmorphism: h phon", "bad morphism"),
    ("accept: private", "unknown acceptor"),
])
def test_grammar_errors(text, fragment):
    with pytest.raises(GrammarError, match=fragment):
        parse_grammar(text)


def test_comments_and_defaults():
    g = parse_grammar("# nothing but a comment\nphon: a  # trailing\nrelator: j \"a\"^-1\n")
    assert g.phon == {"a"} and len(g.schemes) == 1
    assert not g.symmetric and g.morphisms == ()


def test_instantiate_examples(g_grammar, g_prime):
    ran = g_grammar.schemes[5]
    assert instantiate(ran, {"A": Constant("j")}) == [parse_word('r(j) "ran"^-1 j^-1')]
    ev = g_prime.schemes[9]
    s = {"N": Constant("m"), "X": Identifier("x"),
         "P": Abstraction(Compound("s", (HOLE, Identifier("y"))))}
    assert instantiate(ev, s) == [parse_word("ev(m,$x,s($x,$y)) s($x,$y)^-1"),
                                  parse_word('$x m^-1 "every"^-1')]
    assert instantiate(g_grammar.schemes[0], {}) == [parse_word('j "john"^-1')]


def test_instantiate_errors(g_grammar, g_prime):
    with pytest.raises(InstantiationError, match="unbound"):
        instantiate(g_grammar.schemes[5], {})
    with pytest.raises(InstantiationError, match="identifier"):
        instantiate(g_prime.schemes[9], {"N": Constant("m"), "X": Constant("j"),
                                         "P": Abstraction(HOLE)})
    degenerate = parse_grammar("relator: s(A,B) A^-1 B")
    with pytest.raises(InstantiationError):
        instantiate(degenerate.schemes[0], {"A": Constant("j"), "B": Constant("j")})


def test_instantiate_is_order_independent(g_prime):
    tt = g_prime.schemes[11]
    flipped = type(tt)(tuple(reversed(tt.parts)))
    s = {"N": Constant("m"), "X": Identifier("x"),
         "P": Abstraction(Compound("s", (Constant("l"), HOLE)))}
    assert sorted(map(str, instantiate(tt, s))) == sorted(map(str, instantiate(flipped, s)))


def test_accepts_examples(g_prime):
    a = AcceptorPattern()
    w = parse_word('i(s(j,l),p) "paris"^-1 "in"^-1 "louise"^-1 "saw"^-1 "john"^-1')
    assert accepts(a, w) == (parse_term("i(s(j,l),p)"), ["john", "saw", "louise", "in", "paris"])
    assert accepts(a, parse_word("j")) == (Constant("j"), [])
    assert accepts(a, parse_word('"john"^-1 j')) is None
    assert accepts(a, parse_word('j^-1 "john"')) is None
    assert accepts(a, parse_word("1")) is None


def test_acceptor_identifier_rule(g_prime):
    assert binders_of(g_prime.schemes) == {("ev", 3, 1), ("sm", 3, 1), ("tt", 3, 1)}
    bound = parse_word('ev(m,$x,r($x)) "ran"^-1 "man"^-1 "every"^-1')
    free = parse_word('r($x) "ran"^-1')
    assert g_prime.acceptor.accepts(bound) is not None
    assert g_prime.acceptor.accepts(free) is None


@pytest.mark.parametrize("name", FIXTURES)
def test_ground_instances_are_cyclically_reduced(name):
    g = load_grammar(name)
    for sch in g.schemes:
        if not sch.is_ground():
            continue
        for w in instantiate(sch, {}):
            assert is_cyclically_reduced(w)


def test_symmetric_option_adds_inverses(preorder):
    g = parse_grammar('phon: t\nrelator: s "t"^-1\noption: symmetric\n')
    assert [str(s) for s in g.schemes] == ['relator: s "t"^-1', 'relator: "t" s^-1']
    assert parse_grammar(print_grammar(g)) == g
    assert parse_grammar(print_grammar(preorder) + "option: symmetric\n").schemes == symmetrize(preorder).schemes


@given(small_grammars())
def test_random_ground_grammars_round_trip(g):
    again = parse_grammar(print_grammar(g))
    assert [str(s) for s in again.schemes] == [str(s) for s in g.schemes]
    assert all(instantiate(s, {}) == instantiate(t, {}) for s, t in zip(g.schemes, again.schemes))
