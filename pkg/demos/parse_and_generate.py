"""Parsing and generation with the quantifier grammar.

Each reading comes with a computation; its reduced diagram lists the cells
and the multi-relator groups they form.
"""
from gcsgrammar import load_grammar
from gcsgrammar.analysis import precedence_check
from gcsgrammar.diagram import check_cells, diagram_from_parse
from gcsgrammar.engine import generate, parse

g = load_grammar("g-grammar-prime")

for sentence in ["john saw louise in paris", "every man saw some woman"]:
    print(sentence)
    for r in parse(g, sentence.split()):
        d = diagram_from_parse(g, r.computation)
        cc = check_cells(d, g)
        prec = precedence_check(d, "diagram")
        print(f"  {r.sem}: {len(r.computation.groups)} groups, {len(d.cells)} cells, "
              f"groups of sizes {sorted(len(m) for _s, m in cc.groups)}, "
              f"precedence {'acyclic' if prec.acyclic else 'cyclic'}")
        for b in generate(g, r.sem):
            print("    generates:", " ".join(b.words))
