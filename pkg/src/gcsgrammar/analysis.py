"""Morphisms to commutative groups and precedence between cells.

A morphism sends every generator to an integer vector ``(semantic,
phonological)`` and extends to words by signed summation. Conjugation does
not change its value, so a grammar whose multi-relators all take one value
``v`` forces every result ``w`` to satisfy ``h(w) = n v`` where ``n`` is the
number of multi-relator instances used.
"""
from __future__ import annotations

import graphlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .freegroup import Phon, Word
from .lexicon import Grammar, MultiRelatorScheme, RelatorScheme
from .term import AbsApp, Compound, Constant, Identifier, MetaVar, Term


@dataclass(frozen=True)
class MorphismSpec:
    """Valuation: logical nodes and phonological tokens to length-2 integer vectors.

    Identifiers are worth nothing. ``node_weights``/``phon_weights`` hold
    per-functor / per-token overrides of the defaults.
    """
    name: str = "h"
    node: int = 1
    phon: int = 1
    node_weights: tuple = ()     # (functor, weight) pairs
    phon_weights: tuple = ()     # (token, weight) pairs

    dimension = 2

    def node_value(self, functor: str) -> np.ndarray:
        return np.array([dict(self.node_weights).get(functor, self.node), 0], dtype=np.int64)

    def phon_value(self, token: str) -> np.ndarray:
        return np.array([0, dict(self.phon_weights).get(token, self.phon)], dtype=np.int64)

    def valuation(self, generator) -> np.ndarray:
        if isinstance(generator, Phon):
            return self.phon_value(generator.token)
        total = np.zeros(2, dtype=np.int64)
        for f in _nodes(generator):
            total += self.node_value(f)
        return total


H = MorphismSpec()


def morphism_from_options(name: str, opts: dict) -> MorphismSpec:
    """Build a morphism from a ``morphism:`` stanza (``phon=1 term-node=1 node.ev=2 phon.the=0``)."""
    node_w, phon_w = [], []
    node, phon = 1, 1
    for k, v in opts.items():
        if k == "phon":
            phon = v
        elif k == "term-node":
            node = v
        elif k.startswith("node."):
            node_w.append((k[5:], v))
        elif k.startswith("phon."):
            phon_w.append((k[5:], v))
        else:
            raise ValueError(f"unknown morphism option {k!r}")
    return MorphismSpec(name, node, phon, tuple(sorted(node_w)), tuple(sorted(phon_w)))


def grammar_morphism(g: Grammar, name: str = "h") -> Optional[MorphismSpec]:
    opts = g.morphism_options(name)
    if opts is None:
        return H if name == "h" else None
    return morphism_from_options(name, opts)


def _nodes(t: Term):
    """Functor names of the non-identifier nodes of a ground term."""
    if isinstance(t, Constant):
        yield t.name
    elif isinstance(t, Compound):
        yield t.functor
        for a in t.args:
            yield from _nodes(a)


def semantic_size(t: Term) -> int:
    return sum(1 for _ in _nodes(t))


def evaluate_morphism(m: MorphismSpec, w: Word) -> np.ndarray:
    total = np.zeros(m.dimension, dtype=np.int64)
    for a in w:
        total += a.sign * m.valuation(a.generator)
    return total


# --------------------------------------------------------------------------
# Symbolic balance

@dataclass
class SchemeValue:
    constant: np.ndarray
    residual: dict                # indeterminate -> coefficient, zero entries dropped

    @property
    def certifiable(self) -> bool:
        return not self.residual


@dataclass
class BalanceReport:
    morphism: MorphismSpec
    schemes: list                 # (scheme text, SchemeValue)
    uniform: bool
    value: Optional[np.ndarray] = None

    def table(self) -> str:
        rows = [f"{'scheme':<56} value"]
        for text, sv in self.schemes:
            val = tuple(int(x) for x in sv.constant)
            extra = "" if sv.certifiable else "  + " + " ".join(f"{c:+d}*{k}" for k, c in sorted(sv.residual.items()))
            rows.append(f"{text:<56} {val}{extra}")
        verdict = f"uniform {tuple(int(x) for x in self.value)}" if self.uniform else "not uniform"
        rows.append(f"{self.morphism.name}: {verdict}")
        return "\n".join(rows)

    def to_json(self) -> dict:
        return {
            "morphism": self.morphism.name,
            "uniform": self.uniform,
            "value": None if self.value is None else [int(x) for x in self.value],
            "schemes": [{"scheme": text, "value": [int(x) for x in sv.constant],
                         "residual": dict(sv.residual), "certifiable": sv.certifiable}
                        for text, sv in self.schemes],
        }


def scheme_value(m: MorphismSpec, scheme: MultiRelatorScheme) -> SchemeValue:
    """Value of the morphism on any grounded multi-conjugate instance of ``scheme``.

    Each meta-variable (and each ``P[X]``) is an indeterminate; identifier
    variables are worth zero.
    """
    const = np.zeros(m.dimension, dtype=np.int64)
    resid: Counter = Counter()
    ident = scheme.identifier_vars

    def walk(t, sign):
        nonlocal const
        if isinstance(t, MetaVar):
            if t.name not in ident:
                resid[t.name] += sign
        elif isinstance(t, AbsApp):
            resid[str(t)] += sign
        elif isinstance(t, Identifier):
            pass
        elif isinstance(t, Constant):
            const = const + sign * m.node_value(t.name)
        elif isinstance(t, Compound):
            const = const + sign * m.node_value(t.functor)
            for a in t.args:
                walk(a, sign)

    for part in scheme.parts:
        for a in part.atoms:
            if isinstance(a.label, Phon):
                const = const + a.sign * m.phon_value(a.label.token)
            else:
                walk(a.label, a.sign)
    return SchemeValue(const, {k: v for k, v in resid.items() if v})


def check_balance(g: Grammar, m: MorphismSpec = H) -> BalanceReport:
    values = [(str(s), scheme_value(m, s)) for s in g.schemes]
    uniform = bool(values) and all(sv.certifiable for _, sv in values)
    value = None
    if uniform:
        first = values[0][1].constant
        uniform = all(np.array_equal(sv.constant, first) for _, sv in values)
        value = first if uniform else None
    return BalanceReport(m, values, uniform, value)


class NotCertifiedError(ValueError):
    pass


def step_bound(g: Grammar, m: MorphismSpec, target: Word) -> Optional[int]:
    """Number of multi-relator instances any computation of ``target`` must use.

    ``None`` means no ``n >= 0`` fits, i.e. ``target`` is provably not a result.
    """
    report = check_balance(g, m)
    if not report.uniform or not report.value.any():
        raise NotCertifiedError(f"{m.name} is not uniform and non-zero on the grammar")
    return solve_multiple(report.value, evaluate_morphism(m, target))


def solve_multiple(v: np.ndarray, h: np.ndarray) -> Optional[int]:
    """The unique integer ``n >= 0`` with ``n v = h``, if any."""
    k = int(np.flatnonzero(v)[0])
    n, rem = divmod(int(h[k]), int(v[k]))
    if rem or n < 0 or not np.array_equal(n * v, h):
        return None
    return n


def certifying_morphism(g: Grammar) -> Optional[tuple]:
    """``(morphism, value)`` for the first declared (or preset) morphism uniform and non-zero on ``g``."""
    names = [n for n, _ in g.morphisms] or []
    for name in names:
        m = grammar_morphism(g, name)
        rep = check_balance(g, m)
        if rep.uniform and rep.value.any():
            return m, rep.value
    return None


# --------------------------------------------------------------------------
# Precedence

def label_class(label):
    """Static label class: ``('phon', tok)``, ``('fn', functor)``, or ``None`` (wildcard)."""
    if isinstance(label, Phon):
        return ("phon", label.token)
    if isinstance(label, Constant):
        return ("fn", label.name)
    if isinstance(label, Compound):
        return ("fn", label.functor)
    return None


@dataclass
class PrecedenceReport:
    acyclic: bool
    order: list = field(default_factory=list)      # cell indices, a topological order
    cycle: list = field(default_factory=list)      # cell indices, first == last
    labels: list = field(default_factory=list)     # labels along the cycle

    def to_json(self) -> dict:
        return {"acyclic": self.acyclic, "order": self.order, "cycle": self.cycle,
                "labels": [str(x) for x in self.labels]}


def _oriented(cell) -> list:
    if isinstance(cell, (RelatorScheme, Word)):
        atoms = cell.atoms
    else:
        atoms = cell
    return [(a.label if hasattr(a, "label") else a.generator, a.sign) for a in atoms]


def precedence_check(cells, mode: str = "static") -> PrecedenceReport:
    """Precedence ``c1 < c2``: a label negative in ``c1`` is positive in ``c2``.

    ``static``: ``cells`` are relator parts or words; labels compared by class,
    meta-variables match every logical class. ``diagram``: ``cells`` is a
    :class:`~gcsgrammar.diagram.Diagram`, and the relation uses shared edges.
    """
    if mode == "diagram":
        from .diagram import cell_adjacency
        n, edges = cell_adjacency(cells)
    elif mode == "static":
        oriented = [_oriented(c) for c in cells]
        n = len(oriented)
        edges = []
        for i, ci in enumerate(oriented):
            for j, cj in enumerate(oriented):
                for lab, s in ci:
                    if s > 0:
                        continue
                    hit = next((l2 for l2, s2 in cj if s2 > 0 and _same_class(lab, l2)), None)
                    if hit is not None:
                        edges.append((i, j, lab))
                        break
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _order(n, edges)


def _same_class(a, b) -> bool:
    ca, cb = label_class(a), label_class(b)
    if ca is None or cb is None:
        return not (isinstance(a, Phon) or isinstance(b, Phon))
    return ca == cb


def _order(n: int, edges) -> PrecedenceReport:
    preds = {i: set() for i in range(n)}
    why = {}
    for i, j, lab in edges:
        preds[j].add(i)
        why[(i, j)] = lab
    ts = graphlib.TopologicalSorter(preds)
    try:
        order = list(ts.static_order())
    except graphlib.CycleError as e:
        cyc = list(e.args[1])
        # CycleError lists nodes so that each is a predecessor of the previous one
        cyc = list(reversed(cyc))
        labels = [why.get((a, b)) for a, b in zip(cyc, cyc[1:])]
        return PrecedenceReport(False, [], cyc, labels)
    return PrecedenceReport(True, order, [], [])
