"""Cancellation diagrams as combinatorial maps.

A diagram is a connected plane graph given by a rotation system. Every
edge carries a generator and reads it positively from ``tail`` to ``head``.
A dart ``(edge, +1)`` runs tail to head, ``(edge, -1)`` head to tail. The
rotation of a vertex lists the darts leaving it in cyclic order, and faces
are the orbits of ``next(d) = succ_v(rev(d))`` with ``v`` the vertex ``d``
enters.

The outer face walk, started at ``outer`` (a dart leaving the origin),
reads the boundary word clockwise. An interior face reads the inverse of
its walk, which is the clockwise reading of the cell.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .freegroup import Atom, Phon, Word, is_cyclic_permutation, parse_generator, parse_word, reduce
from .lexicon import Grammar, InstantiationError, instantiate
from .term import match


class DiagramError(ValueError):
    pass


class SphereError(DiagramError):
    pass


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    label: object           # generator read positively from tail to head


@dataclass(frozen=True)
class Cell:
    """Provenance of an interior face: the quasi-relator step that created it."""
    dart: tuple             # a dart on the face walk
    scheme: int
    part: int
    group: int
    instance: Word


@dataclass
class Diagram:
    edges: dict = field(default_factory=dict)        # id -> Edge
    rotation: dict = field(default_factory=dict)     # vertex -> [dart, ...]
    origin: int = 0
    outer: Optional[tuple] = None                    # None when there are no edges
    cells: list = field(default_factory=list)

    @property
    def vertices(self) -> list:
        return sorted(self.rotation)

    def tail(self, d) -> int:
        e = self.edges[d[0]]
        return e.tail if d[1] > 0 else e.head

    def head(self, d) -> int:
        e = self.edges[d[0]]
        return e.head if d[1] > 0 else e.tail

    def atom(self, d) -> Atom:
        return Atom(self.edges[d[0]].label, d[1])

    def next(self, d) -> tuple:
        r = self.rotation[self.head(d)]
        return r[(r.index(rev(d)) + 1) % len(r)]

    def walk(self, d) -> list:
        out = [d]
        x = self.next(d)
        while x != d:
            out.append(x)
            x = self.next(x)
        return out


def rev(d) -> tuple:
    return (d[0], -d[1])


# --------------------------------------------------------------------------
# Construction

class _Builder:
    def __init__(self):
        self.d = Diagram(rotation={0: []})
        self.n_vertices = 1

    def vertex(self) -> int:
        v = self.n_vertices
        self.n_vertices += 1
        self.d.rotation[v] = []
        return v

    def edge(self, src: int, dst: int, a: Atom) -> tuple:
        """Add an edge reading ``a`` from ``src`` to ``dst``; return that dart."""
        e = len(self.d.edges)
        if a.sign > 0:
            self.d.edges[e] = Edge(src, dst, a.generator)
            return (e, 1)
        self.d.edges[e] = Edge(dst, src, a.generator)
        return (e, -1)

    def path(self, start: int, atoms, end: Optional[int] = None) -> list:
        """Darts spelling ``atoms`` from ``start``; the last one enters ``end`` if given."""
        darts, v = [], start
        for i, a in enumerate(atoms):
            w = end if (end is not None and i == len(atoms) - 1) else self.vertex()
            darts.append(self.edge(v, w, a))
            v = w
        return darts


def star_diagram(c) -> Diagram:
    """One spike per conjugator, one cycle per relator instance, all at the origin."""
    b = _Builder()
    d = b.d
    O = 0
    for step in c.steps:
        u, r = step.conjugator, step.instance
        if not r.atoms:
            raise DiagramError("empty relator instance")
        spike = b.path(O, u.atoms)
        P = d.head(spike[-1]) if spike else O
        for x, y in zip(spike, spike[1:]):
            d.rotation[d.head(x)] = [rev(x), y]
        cyc = b.path(P, r.atoms, end=P)
        for x, y in zip(cyc, cyc[1:]):
            d.rotation[d.head(x)] = [rev(x), y]
        if spike:
            d.rotation[O].append(spike[0])
            d.rotation[P] = [rev(spike[-1]), cyc[0], rev(cyc[-1])]
        else:
            d.rotation[O].extend([cyc[0], rev(cyc[-1])])
        d.cells.append(Cell(rev(cyc[-1]), step.scheme, step.part, step.group, r))
    d.outer = d.rotation[O][0] if d.rotation[O] else None
    return d


def boundary_word(d: Diagram, start: Optional[int] = None) -> list:
    """Raw (unreduced) atoms of the outer face, from ``start`` (default: the origin)."""
    if d.outer is None:
        return []
    walk = d.walk(d.outer)
    if start is not None and start != d.origin:
        k = next((i for i, x in enumerate(walk) if d.tail(x) == start), None)
        if k is None:
            raise DiagramError(f"vertex {start} is not on the outer face")
        walk = walk[k:] + walk[:k]
    return [d.atom(x) for x in walk]


def faces(d: Diagram) -> list:
    """Face walks, outer face first. A diagram without edges has one face."""
    if d.outer is None:
        return [[]]
    seen = set()
    out = [d.walk(d.outer)]
    seen.update(out[0])
    for v in d.vertices:
        for x in d.rotation[v]:
            if x not in seen:
                w = d.walk(x)
                seen.update(w)
                out.append(w)
    return out


def face_word(d: Diagram, walk) -> Word:
    """Clockwise reading of an interior face."""
    return Word(tuple(d.atom(x).inverse() for x in reversed(walk)))


def euler_characteristic(d: Diagram) -> int:
    return len(d.rotation) - len(d.edges) + len(faces(d))


def cell_faces(d: Diagram) -> list:
    """The face walk of every recorded cell, in cell order."""
    out = []
    for cell in d.cells:
        out.append(d.walk(cell.dart))
    return out


# --------------------------------------------------------------------------
# Folding

def foldable_pair(d: Diagram) -> Optional[tuple]:
    """First ``(d_in, d_out)`` along the boundary from the origin that can be folded.

    The two darts must read ``a^s a^-s`` and lie on distinct edges. The
    wrap-around pair at the origin is not considered, so the origin stays
    on the boundary. A pair whose far endpoints coincide would close off a
    sphere; if only such pairs remain, :class:`SphereError` is raised.
    """
    if d.outer is None:
        return None
    walk = d.walk(d.outer)
    sphere = None
    for x, y in zip(walk, walk[1:]):
        if x[0] == y[0]:
            continue
        ex, ey = d.edges[x[0]], d.edges[y[0]]
        if ex.label != ey.label or x[1] != -y[1]:
            continue
        if d.tail(x) == d.head(y):
            sphere = sphere or (x, y)
            continue
        return x, y
    if sphere is not None:
        raise SphereError(f"folding edges {sphere[0][0]} and {sphere[1][0]} would close a sphere")
    return None


def fold_step(d: Diagram) -> Optional[Diagram]:
    """Identify one foldable pair of boundary edges; ``None`` if ``d`` is reduced."""
    pair = foldable_pair(d)
    if pair is None:
        return None
    d_in, d_out = pair
    v, w1, w2 = d.head(d_in), d.tail(d_in), d.head(d_out)
    rot = {k: list(r) for k, r in d.rotation.items()}
    rot[v].remove(d_out)
    a = rot[w1]
    i = a.index(d_in)
    a = a[i:] + a[:i]
    b = rot[w2]
    j = b.index(rev(d_out))
    b = b[j + 1:] + b[:j]
    rot[w1] = a + b
    del rot[w2]
    e2 = d_out[0]
    edges = {}
    for k, e in d.edges.items():
        if k == e2:
            continue
        edges[k] = Edge(w1 if e.tail == w2 else e.tail, w1 if e.head == w2 else e.head, e.label)
    moved = {rev(d_out): d_in, d_out: rev(d_in)}
    cells = [c if c.dart not in moved else Cell(moved[c.dart], c.scheme, c.part, c.group, c.instance)
             for c in d.cells]
    # both folded darts leave the outer face; the walk resumes after d_out,
    # which starts at the merged origin when the pair opened the walk
    outer = d.outer if d.outer not in pair else d.next(d_out)
    outer = moved.get(outer, outer)
    origin = w1 if d.origin == w2 else d.origin
    return Diagram(edges, rot, origin, outer, cells)


def reduction_sequence(d: Diagram, max_steps: Optional[int] = None) -> list:
    """``[d, fold_step(d), ...]`` up to the first reduced diagram."""
    seq = [d]
    while max_steps is None or len(seq) <= max_steps:
        nxt = fold_step(seq[-1])
        if nxt is None:
            break
        seq.append(nxt)
    return seq


def reduce_diagram(d: Diagram) -> Diagram:
    return reduction_sequence(d)[-1]


def is_reduced(d: Diagram) -> bool:
    try:
        return foldable_pair(d) is None
    except SphereError:
        return False


def diagram_from_parse(g: Grammar, c) -> Diagram:
    """Reduced diagram of a computation (typically one returned by parsing)."""
    for s in c.steps:
        if not 0 <= s.scheme < len(g.schemes):
            raise DiagramError(f"step refers to missing scheme {s.scheme}")
    return reduce_diagram(star_diagram(c))


# --------------------------------------------------------------------------
# Cell checking

@dataclass
class CellCheck:
    ok: bool
    reason: str = ""
    groups: list = field(default_factory=list)      # [(scheme, [face index, ...]), ...]

    def __bool__(self):
        return self.ok


def _part_matches(part, word: Word, s: dict) -> list:
    """Substitutions extending ``s`` under which some rotation of ``word`` spells ``part``."""
    if len(part.atoms) != len(word):
        return []
    out = []
    n = len(word)
    for k in range(n):
        states = [s]
        for pa, wa in zip(part.atoms, word.atoms[k:] + word.atoms[:k]):
            if pa.sign != wa.sign:
                states = []
                break
            nxt = []
            for st in states:
                if isinstance(pa.label, Phon) or isinstance(wa.generator, Phon):
                    if pa.label == wa.generator:
                        nxt.append(st)
                else:
                    nxt.extend(match(pa.label, wa.generator, st))
            states = nxt
            if not states:
                break
        out.extend(states)
    return out


def check_cells(d: Diagram, g: Grammar) -> CellCheck:
    """Every interior face spells a grammar part, and the faces split into complete groups.

    Works from the face words alone (cell provenance is only used to report
    mismatches), trying scheme order first and backtracking.
    """
    walks = faces(d)[1:]
    words = [face_word(d, w) for w in walks]
    for cell in d.cells:
        cw = face_word(d, d.walk(cell.dart))
        if not is_cyclic_permutation(cw, cell.instance):
            return CellCheck(False, f"cell {cell.instance} now reads {cw}")
    options = []
    for i, w in enumerate(words):
        opts = [(si, pi) for si, sch in enumerate(g.schemes) for pi, part in enumerate(sch.parts)
                if _part_matches(part, w, {})]
        if not opts:
            return CellCheck(False, f"face {i} reads {w}, which is no grammar part")
        options.append(opts)

    def solve(i, open_groups):
        if i == len(words):
            if all(len(used) == len(g.schemes[si].parts) for si, _, used, _ in open_groups):
                return open_groups
            return None
        for si, pi in options[i]:
            part = g.schemes[si].parts[pi]
            # join an open group of the same scheme
            for gi, (sj, s, used, members) in enumerate(open_groups):
                if sj != si or pi in used:
                    continue
                for s2 in _part_matches(part, words[i], s):
                    groups = list(open_groups)
                    groups[gi] = (si, s2, used | {pi}, members + [i])
                    r = solve(i + 1, groups)
                    if r is not None:
                        return r
            for s2 in _part_matches(part, words[i], {}):
                r = solve(i + 1, open_groups + [(si, s2, frozenset({pi}), [i])])
                if r is not None:
                    return r
        return None

    found = solve(0, [])
    if found is None:
        return CellCheck(False, "faces cannot be partitioned into complete multi-relator instances")
    for si, s, _, members in found:
        try:
            inst = instantiate(g.schemes[si], s)
        except InstantiationError as e:
            return CellCheck(False, str(e))
        if not all(any(is_cyclic_permutation(words[m], w) for w in inst) for m in members):
            return CellCheck(False, f"faces {members} disagree with {g.schemes[si]}")
    return CellCheck(True, "", [(si, members) for si, _, _, members in found])


def cell_adjacency(d: Diagram):
    """``(n, [(i, j, label)])``: cell ``i`` reads edge ``label`` negatively, cell ``j`` positively."""
    walks = faces(d)[1:]
    where = {}
    for i, w in enumerate(walks):
        for x in w:
            where[x] = i
    out = []
    for k, e in sorted(d.edges.items()):
        a, b = where.get((k, 1)), where.get((k, -1))
        if a is not None and b is not None:
            out.append((a, b, e.label))
    return len(walks), out


# --------------------------------------------------------------------------
# Export

def _q(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(d: Diagram) -> str:
    lines = ["digraph diagram {", "  node [shape=point];"]
    for v in d.vertices:
        if v == d.origin:
            lines.append(f"  v{v} [shape=circle, label=\"O\"];")
        else:
            lines.append(f"  v{v};")
    for k, e in sorted(d.edges.items()):
        lines.append(f"  v{e.tail} -> v{e.head} [label={_q(e.label)}];")
    for i, w in enumerate(faces(d)[1:]):
        lines.append(f"  // cell {i}: {face_word(d, w)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(d: Diagram) -> str:
    doc = {
        "origin": d.origin,
        "outer": list(d.outer) if d.outer else None,
        "vertices": d.vertices,
        "edges": [{"id": k, "tail": e.tail, "head": e.head, "label": str(e.label)}
                  for k, e in sorted(d.edges.items())],
        "rotation": {str(v): [list(x) for x in d.rotation[v]] for v in d.vertices},
        "cells": [{"dart": list(c.dart), "scheme": c.scheme, "part": c.part, "group": c.group,
                   "instance": str(c.instance), "reads": str(face_word(d, d.walk(c.dart)))}
                  for c in d.cells],
        "boundary": " ".join(map(str, boundary_word(d))),
        "result": str(reduce(boundary_word(d))),
        "euler": euler_characteristic(d),
    }
    return json.dumps(doc, indent=2)


def import_json(text: str) -> Diagram:
    doc = json.loads(text)
    edges = {e["id"]: Edge(e["tail"], e["head"], parse_generator(e["label"])) for e in doc["edges"]}
    rotation = {int(v): [tuple(x) for x in r] for v, r in doc["rotation"].items()}
    cells = [Cell(tuple(c["dart"]), c["scheme"], c["part"], c["group"], parse_word(c["instance"]))
             for c in doc["cells"]]
    outer = tuple(doc["outer"]) if doc["outer"] else None
    return Diagram(edges, rotation, doc["origin"], outer, cells)


__all__ = ["Diagram", "Edge", "Cell", "DiagramError", "SphereError", "star_diagram", "boundary_word",
           "faces", "face_word", "euler_characteristic", "fold_step", "reduction_sequence",
           "reduce_diagram", "is_reduced", "diagram_from_parse", "check_cells", "CellCheck",
           "cell_adjacency", "export_dot", "export_json", "import_json"]
