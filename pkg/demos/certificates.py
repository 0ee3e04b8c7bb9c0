"""Step-count certificates from a morphism to Z x Z.

Under h = (semantic size, phonological size) every scheme of the quantifier
grammar is worth (1, -1), so a sentence of n words needs exactly n groups.
The same argument proves that s1 "t2"^-1 is not derivable from
s1 ~ t1, s2 ~ t1, s2 ~ t2 until the relators are made symmetric.
"""
from gcsgrammar import load_grammar, parse_word
from gcsgrammar.analysis import check_balance, grammar_morphism
from gcsgrammar.engine import check_membership, symmetrize

g = load_grammar("g-grammar-prime")
print(check_balance(g, grammar_morphism(g)).table())
print()

pre = load_grammar("preorder")
x = parse_word('s1 "t2"^-1')
for grammar, label in [(pre, "as written"), (symmetrize(pre), "symmetrized")]:
    res = check_membership(grammar, x)
    print(f"{label}: {x} is {res.status} ({res.detail})")
    if res.computation is not None:
        for s in res.computation.steps:
            print("   ", s.instance)
