"""Bounded search for computations over ground relator instances.

The search peels quasi-relators off the left of the target: ``w = q1 r``
with ``r = q1^-1 w`` expressible by one fewer group. Depth-one queries are
answered by a hash lookup over all quasi-relator values, failed
``(remainder, depth)`` pairs are memoized, and remainders whose abelian
image is not a sum of at most ``depth`` group images are cut. Candidates
that cancel against the remainder's prefix are tried first.

Within its bounds (number of groups, conjugator length, conjugator letters
drawn from the atoms of the grammar instances and the target) the search is
exhaustive, so a miss is a proof of absence *within those bounds*.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Optional

from ..freegroup import Atom, Phon, Word
from ..lexicon import Grammar, InstantiationError, instantiate
from ..term import match, subterms
from .computation import Computation, Group, QuasiRelator


# --------------------------------------------------------------------------
# integer-coded words: generator k is +k, its inverse -k

def _ireduce(seq) -> tuple:
    out: list = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _imul(u: tuple, v: tuple) -> tuple:
    i, j = len(u), 0
    while i and j < len(v) and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return u[:i] + v[j:]


def _iinv(u: tuple) -> tuple:
    return tuple(-x for x in reversed(u))


def reduced_words(alphabet, max_len: int):
    """All reduced words over ``alphabet`` (signed ints) of length ``<= max_len``."""
    level = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in level:
            for a in alphabet:
                if not w or w[-1] != -a:
                    nxt.append(w + (a,))
        yield from nxt
        level = nxt


@dataclass(frozen=True)
class GroundGroup:
    """A ground multi-relator instance usable by the bounded search."""
    scheme: int
    substitution: tuple     # sorted (name, value) pairs
    parts: tuple            # Words


def ground_instances(g: Grammar, target: Word, limit: int = 64) -> list:
    """Ground schemes as is; other schemes instantiated from material in ``target``.

    Meta-variables are bound only by matching scheme atoms against logical
    atoms (and their subterms) of the target; nothing is enumerated from the
    term universe.
    """
    material = []
    for a in target:
        if not isinstance(a.generator, Phon):
            for t in subterms(a.generator):
                if t not in material:
                    material.append(t)
    out = []
    for si, sch in enumerate(g.schemes):
        if sch.is_ground():
            out.append(GroundGroup(si, (), tuple(instantiate(sch, {}))))
            continue
        patterns = [a.label for p in sch.parts for a in p.atoms if not isinstance(a.label, Phon)]
        need = sch.metavars()
        substs = [{}]
        for pat in patterns:
            nxt = []
            for s in substs:
                nxt.append(s)
                for t in material:
                    nxt.extend(match(pat, t, s))
            substs = _dedupe(nxt)[:limit * 4]
        seen = set()
        for s in substs:
            if not need <= set(s):
                continue
            key = tuple(sorted(s.items(), key=lambda kv: kv[0]))
            if key in seen:
                continue
            seen.add(key)
            try:
                parts = tuple(instantiate(sch, s))
            except InstantiationError:
                continue
            out.append(GroundGroup(si, key, parts))
            if len(out) >= limit:
                break
    return out


def _dedupe(substs):
    seen, out = set(), []
    for s in substs:
        k = tuple(sorted(s.items(), key=lambda kv: kv[0]))
        if k not in seen:
            seen.add(k)
            out.append(s)
    return out


class _Coder:
    def __init__(self):
        self.ids: dict = {}
        self.gens: list = [None]

    def code(self, w: Word) -> tuple:
        out = []
        for a in w:
            k = self.ids.get(a.generator)
            if k is None:
                k = self.ids[a.generator] = len(self.gens)
                self.gens.append(a.generator)
            out.append(k * a.sign)
        return tuple(out)

    def decode(self, t: tuple) -> Word:
        return Word(tuple(Atom(self.gens[abs(x)], 1 if x > 0 else -1) for x in t))


@dataclass(frozen=True)
class _Q:
    value: tuple
    group: int              # index into the ground-group list
    order: tuple            # part indices in product order
    conjugators: tuple      # coded conjugator per part (same order)


class BoundedSearch:
    def __init__(self, g: Grammar, target: Word, max_conj: int, groups=None, deadline: Optional[float] = None):
        self.g = g
        self.coder = _Coder()
        self.groups = groups if groups is not None else ground_instances(g, target)
        self.target = self.coder.code(target)
        self.coded_parts = [[self.coder.code(p) for p in gg.parts] for gg in self.groups]
        gens = sorted(range(1, len(self.coder.gens)), key=lambda k: str(self.coder.gens[k]))
        self.alphabet = [s * k for k in gens for s in (1, -1)]
        self.max_conj = max_conj
        self.stop = None if deadline is None else time.monotonic() + deadline
        self.timed_out = False
        self._ticks = 0
        self.quasi = self._quasi_values()
        self.index: dict = {}
        for q in self.quasi:
            self.index.setdefault(q.value, q)
        self._abelian = [self._ab(q.value) for q in self.quasi]
        self._group_ab = sorted({self._ab(q.value) for q in self.quasi})

    def _ab(self, t: tuple) -> tuple:
        v = [0] * len(self.coder.gens)
        for x in t:
            v[abs(x)] += 1 if x > 0 else -1
        return tuple(v)

    def _quasi_values(self) -> list:
        conjs = list(reduced_words(self.alphabet, self.max_conj))
        conjs.sort(key=len)
        out = []
        for gi, parts in enumerate(self.coded_parts):
            orders = list(itertools.permutations(range(len(parts)))) if len(parts) > 1 else [(0,)]
            for order in orders:
                for us in itertools.product(conjs, repeat=len(parts)):
                    v = ()
                    for pi, u in zip(order, us):
                        v = _imul(v, _imul(_imul(u, parts[pi]), _iinv(u)))
                    out.append(_Q(v, gi, order, us))
        # shorter conjugators first, then scheme order
        out.sort(key=lambda q: (sum(map(len, q.conjugators)), q.group))
        return out

    def _abelian_sums(self, depth: int, cap: int = 200_000):
        zero = tuple([0] * len(self.coder.gens))
        levels = [{zero}]
        for _ in range(depth):
            nxt = set(levels[-1])
            for s in levels[-1]:
                for a in self._group_ab:
                    nxt.add(tuple(x + y for x, y in zip(s, a)))
            if len(nxt) > cap:
                return None
            levels.append(nxt)
        return levels

    def _out(self) -> bool:
        self._ticks += 1
        if self.stop is not None and self._ticks % 512 == 0 and time.monotonic() > self.stop:
            self.timed_out = True
        return self.timed_out

    def search(self, max_depth: int) -> Optional[list]:
        """Iterative deepening on the number of groups; returns a list of ``_Q``."""
        if not self.target:
            return []
        sums = self._abelian_sums(max_depth)
        failed: set = set()

        def rec(rem, depth):
            if not rem:
                return []
            if depth == 0 or self._out():
                return None
            if sums is not None and self._ab(rem) not in sums[depth]:
                return None
            if depth == 1:
                q = self.index.get(rem)
                return [q] if q is not None else None
            if (rem, depth) in failed:
                return None
            ranked = sorted(self.quasi, key=lambda q: -_common_prefix(q.value, rem))
            for q in ranked:
                r = rec(_imul(_iinv(q.value), rem), depth - 1)
                if r is not None:
                    return [q] + r
                if self.timed_out:
                    return None
            failed.add((rem, depth))
            return None

        for depth in range(1, max_depth + 1):
            r = rec(self.target, depth)
            if r is not None:
                return r
            if self.timed_out:
                return None
        return None

    def to_computation(self, qs: list) -> Computation:
        steps, groups = [], []
        for q in qs:
            gg = self.groups[q.group]
            gid = len(groups)
            groups.append(Group(gg.scheme, dict(gg.substitution)))
            for pi, u in zip(q.order, q.conjugators):
                steps.append(QuasiRelator(gg.scheme, pi, gid, gg.parts[pi], self.coder.decode(u)))
        return Computation(tuple(steps), tuple(groups))


def _common_prefix(a: tuple, b: tuple) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def bounded_membership(g: Grammar, w: Word, max_steps: int, max_conj: int,
                       deadline: Optional[float] = None, groups=None):
    """Return ``(computation or None, timed_out)``; conjugator length deepened from 0."""
    for L in range(max_conj + 1):
        bs = BoundedSearch(g, w, L, groups=groups, deadline=deadline)
        found = bs.search(max_steps)
        if found is not None:
            return bs.to_computation(found), False
        if bs.timed_out:
            return None, True
    return None, False


# --------------------------------------------------------------------------
# Brute-force oracle (independent word representation)

def _sreduce(seq) -> tuple:
    stack: list = []
    for name, sign in seq:
        if stack and stack[-1] == (name, -sign):
            stack.pop()
        else:
            stack.append((name, sign))
    return tuple(stack)


def _sword(w: Word) -> tuple:
    return tuple((str(a.generator), a.sign) for a in w)


def oracle_membership(g: Grammar, w: Word, max_steps: int, max_conj: int, cap: int = 2_000_000):
    """Enumerate all computations with ``<= max_steps`` groups and conjugators of
    length ``<= max_conj`` and return the lexicographically first whose product
    is ``w`` (or ``None``). Raises ``RuntimeError`` beyond ``cap`` products.
    """
    target = _sword(w)
    if not target:
        return Computation()
    groups = ground_instances(g, w)
    names = sorted({n for gg in groups for p in gg.parts for n, _ in _sword(p)} | {n for n, _ in target})
    atoms = [(n, s) for n in names for s in (1, -1)]
    conjs = [()]
    for length in range(1, max_conj + 1):
        for c in itertools.product(atoms, repeat=length):
            if _sreduce(c) == c:
                conjs.append(c)
    by_name = {str(a.generator): a.generator for gg in groups for p in gg.parts for a in p}
    by_name.update({str(a.generator): a.generator for a in w})
    moves = []      # (value, description) in lexicographic order
    for gi, gg in enumerate(groups):
        parts = [_sword(p) for p in gg.parts]
        for order in itertools.permutations(range(len(parts))):
            for us in itertools.product(conjs, repeat=len(parts)):
                seq = []
                for pi, u in zip(order, us):
                    seq += list(u) + list(parts[pi]) + [(n, -s) for n, s in reversed(u)]
                moves.append((_sreduce(seq), (gi, order, us)))
    # level k: product value -> lexicographically first move sequence reaching it
    level = {(): ()}
    work = 0
    for k in range(1, max_steps + 1):
        best = None
        for mi, (v, _) in enumerate(moves):
            prev = _sreduce(target + tuple((n, -s) for n, s in reversed(v)))
            if prev in level:
                cand = level[prev] + (mi,)
                if best is None or cand < best:
                    best = cand
        if best is not None:
            return _oracle_computation(groups, moves, best, by_name)
        if k == max_steps:
            break
        nxt = dict(level)
        for p, seq in sorted(level.items(), key=lambda kv: kv[1]):
            for mi, (v, _) in enumerate(moves):
                work += 1
                if work > cap:
                    raise RuntimeError("oracle budget exceeded")
                q = _sreduce(p + v)
                cand = seq + (mi,)
                if q not in nxt or cand < nxt[q]:
                    nxt[q] = cand
        level = nxt
    return None


def _oracle_computation(groups, moves, seq, by_name) -> Computation:
    steps, gs = [], []
    for mi in seq:
        gi, order, us = moves[mi][1]
        gg = groups[gi]
        gid = len(gs)
        gs.append(Group(gg.scheme, dict(gg.substitution)))
        for pi, u in zip(order, us):
            conj = Word(tuple(Atom(by_name[n], s) for n, s in u))
            steps.append(QuasiRelator(gg.scheme, pi, gid, gg.parts[pi], conj))
    return Computation(tuple(steps), tuple(gs))
