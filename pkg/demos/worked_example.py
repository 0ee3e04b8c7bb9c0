"""Membership of c^-1 a a c^-1 in the closure of three small relators.

Finds a computation, draws its star diagram and folds it down, printing
the boundary word after every fold.
"""
from gcsgrammar import load_grammar, parse_word
from gcsgrammar.diagram import boundary_word, check_cells, reduction_sequence, star_diagram
from gcsgrammar.engine import check_membership

g = load_grammar("abc")
target = parse_word("c^-1 a a c^-1")
res = check_membership(g, target)
print(f"{target}: {res.status} ({res.detail})")
for s in res.computation.steps:
    print(f"  conjugator {s.conjugator!s:>4}  relator {s.instance}")

seq = reduction_sequence(star_diagram(res.computation))
for i, d in enumerate(seq):
    print(f"fold {i}: {len(d.rotation)} vertices, {len(d.edges)} edges, boundary",
          " ".join(map(str, boundary_word(d))))
print("cells of the reduced diagram are relators:", bool(check_cells(seq[-1], g)))
