"""Membership, parsing and generation over a grammar's relators.

Lexical grammars are handled by rewriting (:mod:`.lexical`); everything
else falls back to the bounded quasi-relator search (:mod:`.bounded`).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from ..analysis import certifying_morphism, evaluate_morphism, solve_multiple
from ..freegroup import ONE, Atom, Word, cyclic_reduce, phon_word
from ..lexicon import Grammar
from ..term import Term, canonical_identifiers, identifiers, is_ground
from .bounded import bounded_membership, ground_instances, oracle_membership
from .computation import (EMPTY, Computation, Group, QuasiRelator, SearchBounds,
                          Verdict, computation_to_json, result_of, symmetrize,
                          verify)
from .lexical import (NotLexicalError, Reading, Readings, generate_search,
                      is_lexical, parse_tree_search, rename_computation)

__all__ = [
    "Computation", "Group", "QuasiRelator", "SearchBounds", "Verdict", "EMPTY",
    "Reading", "Readings", "MembershipResult", "NotLexicalError", "UnknownTokenError",
    "check_membership", "parse", "generate", "oracle_membership", "verify",
    "result_of", "symmetrize", "computation_to_json", "readings_to_json",
]

MEMBER = "member"
NON_MEMBER = "non-member-certified"
UNKNOWN = "unknown"


class UnknownTokenError(ValueError):
    pass


@dataclass(frozen=True)
class MembershipResult:
    status: str                                 # member | non-member-certified | unknown
    computation: Optional[Computation] = None
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.status == MEMBER


def _group_cap(g: Grammar, component: int, amount, bounds: SearchBounds) -> Optional[int]:
    """Exact group count forced by a certifying morphism, or the bound from ``bounds``.

    ``amount`` is the morphism value of the known side of the query, in
    ``component`` (0 semantic, 1 phonological).
    """
    cert = certifying_morphism(g)
    if cert is None:
        return bounds.max_steps
    _, v = cert
    if v[component] == 0:
        return bounds.max_steps
    n, rem = divmod(int(amount), int(v[component]))
    if rem or n < 0:
        return None
    return n


def parse(g: Grammar, words, bounds: SearchBounds = SearchBounds()) -> Readings:
    """All logical forms for ``words``, in search order (scheme order, then leftmost)."""
    words = list(words)
    unknown = [w for w in words if w not in g.phon]
    if unknown:
        raise UnknownTokenError(f"unknown token(s): {' '.join(unknown)}")
    cert = certifying_morphism(g)
    phon = 0
    if cert is not None:
        m, _ = cert
        phon = int(evaluate_morphism(m, phon_word(words, -1))[1])
    cap = _group_cap(g, 1, phon, bounds)
    if cap is None:
        return Readings([], "exhausted")
    return parse_tree_search(g, words, bounds, cap)


def generate(g: Grammar, sem: Term, bounds: SearchBounds = SearchBounds()) -> Readings:
    """All surface strings for ``sem`` with their computations."""
    if not is_ground(sem):
        raise ValueError(f"{sem} contains meta-variables")
    cert = certifying_morphism(g)
    size = 0
    if cert is not None:
        m, _ = cert
        size = int(evaluate_morphism(m, Word((Atom(sem, 1),)))[0])
    cap = _group_cap(g, 0, size, bounds)
    if cap is None:
        return Readings([], "exhausted")
    return generate_search(g, sem, bounds, cap)


def _groups(n: int) -> str:
    return f"{n} group" if n == 1 else f"{n} groups"


def _max_perimeter(g: Grammar) -> int:
    return max((sum(len(p) for p in s.parts) for s in g.schemes), default=0)


def _max_part(g: Grammar) -> int:
    return max((len(p) for s in g.schemes for p in s.parts), default=0)


def conjugator_bound(g: Grammar, w: Word, n: int) -> int:
    """Conjugator length sufficient for any ``n``-group computation of ``w``.

    A reduced diagram for ``w`` with ``n`` cells has at most
    ``(|w| + n * perimeter) / 2`` edges, so every cell is reachable from the
    base point along a tree path no longer than that; rotating the cell's
    reading to the written start of its part adds at most one part length.
    """
    return math.ceil((len(w) + n * _max_perimeter(g)) / 2) + _max_part(g)


def _try_lexical(g: Grammar, core: Word, bounds: SearchBounds) -> Optional[Computation]:
    shape = g.acceptor.accepts(core)
    if shape is None or not is_lexical(g):
        return None
    sem, tokens = shape
    if any(t not in g.phon for t in tokens):
        return None
    want = canonical_identifiers(sem)
    for r in parse(g, tokens, bounds):
        if r.sem == want:
            mapping = dict(zip(identifiers(r.sem), identifiers(sem)))
            return rename_computation(r.computation, mapping)
    return None


def check_membership(g: Grammar, w: Word, bounds: SearchBounds = SearchBounds()) -> MembershipResult:
    """Decide ``w`` in the normal submonoid closure, within ``bounds``.

    ``member`` comes with a verified computation. ``non-member-certified``
    needs an all-ground grammar and a morphism fixing the group count; the
    search space it then bounds was exhausted. Everything else is ``unknown``.
    """
    if w == ONE:
        return MembershipResult(MEMBER, EMPTY, "empty product")
    start = time.monotonic()

    def remaining():
        if bounds.deadline is None:
            return None
        return max(0.0, bounds.deadline - (time.monotonic() - start))

    core, u = cyclic_reduce(w)

    def done(c: Computation, detail: str) -> MembershipResult:
        c = c.conjugated(u) if u != ONE else c
        return MembershipResult(MEMBER, c, detail)

    comp = _try_lexical(g, core, bounds)
    if comp is not None:
        return done(comp, "lexical parse")

    cert = certifying_morphism(g)
    if cert is not None and all(s.is_ground() for s in g.schemes):
        m, v = cert
        n = solve_multiple(v, evaluate_morphism(m, core))
        if n is None:
            return MembershipResult(NON_MEMBER, None,
                                    f"{m.name}(w) = {tuple(int(x) for x in evaluate_morphism(m, core))} "
                                    f"is not a non-negative multiple of {tuple(int(x) for x in v)}")
        L = conjugator_bound(g, core, n)
        comp, timed_out = bounded_membership(g, core, n, L, remaining(), ground_instances(g, core))
        if comp is not None:
            return done(comp, f"bounded search, {_groups(n)}")
        if timed_out:
            return MembershipResult(UNKNOWN, None, "deadline reached")
        return MembershipResult(NON_MEMBER, None,
                                f"no computation with {_groups(n)} and conjugators up to length {L}")

    comp, timed_out = bounded_membership(g, core, bounds.max_steps, bounds.max_conjugator_length,
                                         remaining(), ground_instances(g, core))
    if comp is not None:
        return done(comp, "bounded search")
    why = "deadline reached" if timed_out else (
        f"no computation with up to {bounds.max_steps} groups and conjugators up to "
        f"length {bounds.max_conjugator_length}; no certificate")
    return MembershipResult(UNKNOWN, None, why)


def readings_to_json(g: Grammar, query: str, readings: Readings) -> dict:
    out = []
    for r in readings:
        doc = computation_to_json(g, r.computation)
        out.append({"sem": str(r.sem), "words": list(r.words), **doc})
    return {"query": query, "readings": out, "status": readings.status}
