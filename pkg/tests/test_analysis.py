import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcsgrammar.analysis import (H, MorphismSpec, NotCertifiedError, certifying_morphism,
                                 check_balance, evaluate_morphism, grammar_morphism,
                                 precedence_check, semantic_size, step_bound)
from gcsgrammar.diagram import diagram_from_parse
from gcsgrammar.engine import (SearchBounds, check_membership, generate, oracle_membership,
                               parse, result_of)
from gcsgrammar.freegroup import ONE, conjugate, parse_word, phon_word
from gcsgrammar.lexicon import load_grammar, parse_grammar
from gcsgrammar.term import parse_term

from .conftest import ground_grammar, words

w = parse_word
SENTENCES = ["john saw louise in paris", "every man saw some woman", "the man that louise saw ran",
             "every man ran", "john ran"]


def h(x):
    return tuple(int(v) for v in evaluate_morphism(H, x))


def test_semantic_size_examples():
    assert semantic_size(parse_term("j")) == 1
    assert semantic_size(parse_term("ev(m,$x,sm(w,$y,s($x,$y)))")) == 5
    assert semantic_size(parse_term("i(s(j,l),p)")) == 5
    assert semantic_size(parse_term("r(t(tt(m,$x,s(l,$x))))")) == 6


def test_evaluate_examples():
    assert h(ONE) == (0, 0)
    sent = w("ev(m,$x,sm(w,$y,s($x,$y)))") * ~phon_word("every man saw some woman".split())
    assert h(sent) == (5, -5)


@given(words(8), words(8))
def test_morphism_is_additive(x, y):
    assert np.array_equal(evaluate_morphism(H, x * y), evaluate_morphism(H, x) + evaluate_morphism(H, y))


@given(words(8), words(6))
def test_morphism_ignores_conjugation(x, u):
    assert np.array_equal(evaluate_morphism(H, conjugate(x, u)), evaluate_morphism(H, x))


def test_custom_weights():
    m = MorphismSpec("k", node=0, phon=2, node_weights=(("s", 3),))
    assert tuple(evaluate_morphism(m, w('s(j,l) "saw"^-1'))) == (3, -2)


@pytest.mark.parametrize("name", ["g-grammar", "g-grammar-prime"])
def test_fixture_grammars_balance(name):
    g = load_grammar(name)
    rep = check_balance(g, grammar_morphism(g))
    assert rep.uniform and tuple(rep.value) == (1, -1)
    assert len(rep.schemes) == len(g.schemes)
    assert all(sv.certifiable for _t, sv in rep.schemes)
    doc = rep.to_json()
    assert doc["uniform"] and doc["value"] == [1, -1]
    assert "uniform (1, -1)" in rep.table()


def test_balance_random_instances_agree(g_grammar):
    # symbolic value cross-checked on concrete instantiations
    for r in parse(g_grammar, "john saw louise in paris".split()):
        by_group = {}
        for s in r.computation.steps:
            by_group.setdefault(s.group, ONE)
            by_group[s.group] = by_group[s.group] * s.value
        assert all(h(v) == (1, -1) for v in by_group.values())


def test_unbalanced_relator_refused():
    g = parse_grammar('phon: x\nrelator: a a "x"^-1\nrelator: j "x"^-1\nmorphism: h phon=1 term-node=1')
    rep = check_balance(g, grammar_morphism(g))
    assert [tuple(int(v) for v in sv.constant) for _t, sv in rep.schemes] == [(2, -1), (1, -1)]
    assert not rep.uniform and certifying_morphism(g) is None
    with pytest.raises(NotCertifiedError):
        step_bound(g, H, w("a"))


def test_residual_makes_scheme_uncertifiable():
    g = parse_grammar("relator: f(A) A^-1 A^-1\nmorphism: h phon=1 term-node=1")
    rep = check_balance(g, H)
    (_t, sv), = rep.schemes
    assert sv.residual == {"A": -1} and not rep.uniform


def test_step_bound_examples(g_prime):
    sent = w("i(s(j,l),p)") * ~phon_word("john saw louise in paris".split())
    assert step_bound(g_prime, H, sent) == 5
    assert step_bound(g_prime, H, w("ev(m,$x,sm(w,$y,s($x,$y)))")) is None
    gen = w("ev(m,$x,sm(w,$y,s($x,$y)))") * ~phon_word("every man saw some woman".split())
    assert step_bound(g_prime, H, gen) == 5
    three_two = w('s(j,l) "john"^-1 "saw"^-1')
    assert step_bound(g_prime, H, three_two) is None


@pytest.mark.parametrize("sentence", SENTENCES)
def test_certificate_soundness(g_prime, sentence):
    rs = parse(g_prime, sentence.split())
    assert rs
    for r in rs:
        n = step_bound(g_prime, H, result_of(r.computation))
        assert len(r.computation.groups) == n == len(sentence.split()) == semantic_size(r.sem)
        for b in generate(g_prime, r.sem):
            assert len(b.computation.groups) == n


def test_non_membership_confirmed_by_oracle(preorder):
    x = w('s1 "t2"^-1')
    assert step_bound(preorder, H, x) == 1
    assert check_membership(preorder, x).status == "non-member-certified"
    assert oracle_membership(preorder, x, 3, 2) is None
    y = w('s1 s2 "t1"^-1')
    assert step_bound(preorder, H, y) is None
    assert oracle_membership(preorder, y, 3, 2) is None


def test_precedence_static_cfg():
    g = load_grammar("cfg-chart")
    parts = [p for s in g.schemes for p in s.parts]
    rep = precedence_check(parts, "static")
    assert rep.acyclic
    pos = {str(parts[i]): k for k, i in enumerate(rep.order)}
    assert pos['s vp^-1 np^-1'] < pos['vp np^-1 v^-1'] < pos['v "likes"^-1']


def test_precedence_diagram_paris(g_grammar):
    (r,) = [r for r in parse(g_grammar, "john saw louise in paris".split())
            if r.sem == parse_term("i(s(j,l),p)")]
    d = diagram_from_parse(g_grammar, r.computation)
    rep = precedence_check(d, "diagram")
    assert rep.acyclic and len(rep.order) == 5


@pytest.mark.parametrize("sentence", SENTENCES)
def test_precedence_acyclic_on_parse_diagrams(g_prime, sentence):
    for r in parse(g_prime, sentence.split()):
        assert precedence_check(diagram_from_parse(g_prime, r.computation), "diagram").acyclic


def test_precedence_two_cell_cycle():
    rep = precedence_check([w("a b^-1"), w("b a^-1")], "static")
    assert not rep.acyclic
    assert rep.cycle[0] == rep.cycle[-1] and sorted(set(rep.cycle)) == [0, 1]
    assert {str(x) for x in rep.labels} == {"a", "b"}
    assert rep.to_json()["acyclic"] is False


def test_precedence_static_meta_variables_are_wildcards(g_prime):
    parts = [p for s in g_prime.schemes for p in s.parts]
    assert not precedence_check(parts, "static").acyclic


@given(st.lists(st.sampled_from(["a b^-1", "b c^-1", "c d^-1", "d e^-1"]), unique=True))
def test_precedence_chain_is_acyclic(rels):
    assert precedence_check([w(x) for x in rels], "static").acyclic


def test_no_morphism_no_certificate():
    assert certifying_morphism(ground_grammar([w("a b^-1")])) is None
    assert check_membership(ground_grammar([w("a b^-1")]), w("b a^-1"),
                            SearchBounds(max_steps=1, max_conjugator_length=0)).status == "unknown"
