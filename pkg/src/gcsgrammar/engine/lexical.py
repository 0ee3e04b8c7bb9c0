"""Parsing and generation for lexical grammars.

A part is lexical when exactly one of its atoms is positive. Rotated so
that this head comes first, the part reads ``H T_k^-1 ... T_1^-1`` and acts
as a rewrite between the head and the surface sequence ``T_1 ... T_k``:
bottom-up (parsing) the sequence is replaced by the head, top-down
(generation) the head is expanded into it. Parts of a multi-relator share
one substitution; a group stays open until every part has been used.

Both directions yield a derivation tree. Listing its nodes in preorder and
conjugating each rule instance by the surface words to its left gives a
computation whose product is ``S W_n^-1 ... W_1^-1``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from ..freegroup import Atom, Phon, Word, phon_word
from ..lexicon import Grammar, free_identifiers
from ..term import (Abstraction, Compound, Constant, Identifier, Term,
                    UnboundVariableError,
                    canonical_identifiers, identifiers, match, metavars,
                    rename_identifiers, substitute)
from .computation import Computation, Group, QuasiRelator, SearchBounds


class NotLexicalError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    scheme: int
    part: int
    head: object            # pattern of the positive atom
    tail: tuple             # patterns in surface order
    rotation: int           # index of the head in the written part


def lexical_rules(g: Grammar) -> list:
    rules = []
    for si, sch in enumerate(g.schemes):
        for pi, part in enumerate(sch.parts):
            pos = part.positive()
            if len(pos) != 1:
                raise NotLexicalError(f"part '{part}' needs exactly one positive atom")
            h = pos[0]
            rotated = part.atoms[h:] + part.atoms[:h]
            head = rotated[0].label
            if isinstance(head, Phon):
                raise NotLexicalError(f"part '{part}' has a phonological head")
            tail = tuple(a.label for a in reversed(rotated[1:]))
            rules.append(Rule(si, pi, head, tail, h))
    return rules


def is_lexical(g: Grammar) -> bool:
    try:
        lexical_rules(g)
    except NotLexicalError:
        return False
    return True


@dataclass(frozen=True)
class Reading:
    sem: Term
    words: tuple
    computation: Computation

    @property
    def word(self) -> Word:
        return Word((Atom(self.sem, 1),)) * ~phon_word(self.words)


class Readings(list):
    """Search results in deterministic order, plus the search ``status``."""

    def __init__(self, items=(), status: str = "exhausted"):
        super().__init__(items)
        self.status = status


@dataclass(frozen=True)
class Node:
    label: object
    rule: Optional[Rule] = None
    group: int = -1
    instance: Optional[Word] = None
    children: tuple = ()


@dataclass(frozen=True)
class _Open:
    scheme: int
    subst: tuple            # sorted (name, value) pairs
    used: frozenset


class _Budget:
    def __init__(self, bounds: SearchBounds):
        self.stop = None if bounds.deadline is None else time.monotonic() + bounds.deadline
        self.hit = False
        self.ticks = 0

    def out(self) -> bool:
        self.ticks += 1
        if self.stop is not None and self.ticks % 256 == 0 and time.monotonic() > self.stop:
            self.hit = True
        return self.hit


def _match_seq(patterns, labels, s: dict, ident_vars) -> list:
    """All substitutions matching ``patterns`` to ``labels`` position-wise."""
    states = [s]
    for pat, lab in zip(patterns, labels):
        nxt = []
        for st in states:
            if isinstance(pat, Phon):
                if pat == lab:
                    nxt.append(st)
            elif not isinstance(lab, Phon):
                nxt.extend(match(pat, lab, st))
        states = nxt
        if not states:
            break
    return [st for st in states
            if all(isinstance(st[x], Identifier) for x in ident_vars if x in st)]


def _ground(pattern, s: dict):
    if isinstance(pattern, Phon):
        return pattern
    return substitute(pattern, s)


def _instance(g: Grammar, rule: Rule, s: dict) -> Word:
    part = g.schemes[rule.scheme].parts[rule.part]
    atoms = part.atoms[rule.rotation:] + part.atoms[:rule.rotation]
    return Word(tuple(Atom(_ground(a.label, s), a.sign) for a in atoms))


def _bind_fresh(names, s: dict, gid: int, ident_vars) -> Optional[dict]:
    """Bind unbound identifier variables among ``names`` to fresh identifiers."""
    missing = [x for x in sorted(names) if x not in s]
    if any(x not in ident_vars for x in missing):
        return None
    out = dict(s)
    for x in missing:
        out[x] = Identifier(f"{x.lower()}{gid + 1}")
    return out


def _pattern_vars(pattern) -> set:
    return set() if isinstance(pattern, Phon) else metavars(pattern)


def _state_key(labels, groups, n_groups):
    order: dict = {}

    def visit(t):
        if isinstance(t, Abstraction):
            t = t.body
        if isinstance(t, Phon):
            return
        for x in identifiers(t):
            order.setdefault(x, Identifier(f"k{len(order)}"))

    for lab in labels:
        visit(lab)
    for grp in groups:
        if grp is None:
            continue
        for _, v in grp.subst:
            visit(v)

    def ren(t):
        if isinstance(t, Abstraction):
            return Abstraction(rename_identifiers(t.body, order))
        if isinstance(t, Phon):
            return t
        return rename_identifiers(t, order)

    pending = [(gr.scheme, tuple((k, ren(v)) for k, v in gr.subst), tuple(sorted(gr.used)))
               for gr in groups if gr is not None]
    return tuple(ren(l) for l in labels), tuple(sorted(pending, key=repr)), n_groups


def _candidates(g, rule, groups, max_groups):
    """(group id or None for new, start substitution) pairs for applying ``rule``."""
    out = []
    for gid, grp in enumerate(groups):
        if grp is not None and grp.scheme == rule.scheme and rule.part not in grp.used:
            out.append((gid, dict(grp.subst)))
    if len(groups) < max_groups:
        out.append((None, {}))
    return out


def _apply_group(g, groups, gid, rule, s):
    n_parts = len(g.schemes[rule.scheme].parts)
    groups = list(groups)
    if gid is None:
        gid = len(groups)
        groups.append(None)
        used = frozenset({rule.part})
    else:
        used = groups[gid].used | {rule.part}
    groups[gid] = None if len(used) == n_parts else _Open(rule.scheme, tuple(sorted(s.items())), used)
    return tuple(groups), gid


# --------------------------------------------------------------------------
# Parsing

def parse_tree_search(g: Grammar, tokens, bounds: SearchBounds, max_groups: int) -> Readings:
    """Shift-reduce over the token sequence.

    Reductions only rewrite a suffix of the stack, so every derivation tree
    is built exactly once, in postorder. At each state reductions are tried
    in scheme order before the next token is shifted.
    """
    rules = lexical_rules(g)
    ident = {si: sch.identifier_vars for si, sch in enumerate(g.schemes)}
    tokens = tuple(tokens)
    budget = _Budget(bounds)
    seen = set()
    found: dict = {}

    def dfs(stack, pos, groups, substs):
        if budget.out() or len(found) >= bounds.max_results:
            return
        key = (_state_key([n.label for n in stack], groups, len(groups)), pos)
        if key in seen:
            return
        seen.add(key)
        if (pos == len(tokens) and len(stack) == 1 and not isinstance(stack[0].label, Phon)
                and all(gr is None for gr in groups)
                and not free_identifiers(stack[0].label, g.acceptor.binders)):
            sem = canonical_identifiers(stack[0].label)
            if sem not in found:
                found[sem] = (stack[0], substs)
        for rule in rules:
            k = len(rule.tail)
            if k > len(stack):
                continue
            window = stack[len(stack) - k:]
            labels = [n.label for n in window]
            if not all(_compatible(p, lab) for p, lab in zip(rule.tail, labels)):
                continue
            for gid, start in _candidates(g, rule, groups, max_groups):
                for s in _match_seq(rule.tail, labels, start, ident[rule.scheme]):
                    new_gid = len(groups) if gid is None else gid
                    s2 = _bind_fresh(_pattern_vars(rule.head) - set(s), s, new_gid, ident[rule.scheme])
                    if s2 is None:
                        continue
                    try:
                        head = substitute(rule.head, s2)
                        inst = _instance(g, rule, s2) if _grounds_part(g, rule, s2) else None
                    except (ValueError, UnboundVariableError):
                        continue
                    groups2, used_gid = _apply_group(g, groups, gid, rule, s2)
                    node = Node(head, rule, used_gid, inst, tuple(window))
                    substs2 = {**substs, used_gid: {**substs.get(used_gid, {}), **s2}}
                    dfs(stack[:len(stack) - k] + (node,), pos, groups2, substs2)
        if pos < len(tokens):
            dfs(stack + (Node(Phon(tokens[pos])),), pos + 1, groups, substs)

    dfs((), 0, (), {})
    readings = []
    for sem, (root, substs) in found.items():
        comp = _tree_computation(g, root, substs)
        readings.append(_canonical_reading(sem, tuple(tokens), comp, root.label))
    return Readings(readings, "budget" if budget.hit else "exhausted")


def _compatible(pattern, label) -> bool:
    """Cheap necessary condition for ``pattern`` to match ``label``."""
    if isinstance(pattern, Phon) or isinstance(label, Phon):
        return pattern == label
    if isinstance(pattern, Compound):
        return isinstance(label, Compound) and label.functor == pattern.functor and len(label.args) == len(pattern.args)
    if isinstance(pattern, Constant):
        return label == pattern
    return True


def _grounds_part(g, rule, s) -> bool:
    part = g.schemes[rule.scheme].parts[rule.part]
    return part.metavars() <= set(s)


def _tree_computation(g: Grammar, root: Node, substs: dict) -> Computation:
    steps = []
    gids: dict = {}

    def walk(node, prefix):
        if node.rule is None:
            return prefix + [node.label.token]
        if node.group not in gids:
            gids[node.group] = len(gids)
        s = substs[node.group]
        steps.append(QuasiRelator(node.rule.scheme, node.rule.part, gids[node.group],
                                  _instance(g, node.rule, s), phon_word(prefix)))
        for ch in node.children:
            prefix = walk(ch, prefix)
        return prefix

    walk(root, [])
    groups = [None] * len(gids)
    for raw, gi in gids.items():
        sch = next(st.scheme for st in steps if st.group == gi)
        groups[gi] = Group(sch, dict(substs[raw]))
    return Computation(tuple(steps), tuple(groups))


def _canonical_reading(sem, words, comp: Computation, raw_sem) -> Reading:
    mapping = {x: y for x, y in zip(identifiers(raw_sem), identifiers(sem))}
    return Reading(sem, tuple(words), rename_computation(comp, mapping))


def rename_computation(c: Computation, mapping: dict) -> Computation:
    if not mapping:
        return c

    def ren_word(w):
        return Word(tuple(a if isinstance(a.generator, Phon)
                          else Atom(rename_identifiers(a.generator, mapping), a.sign) for a in w))

    def ren_val(v):
        if isinstance(v, Abstraction):
            return Abstraction(rename_identifiers(v.body, mapping))
        return rename_identifiers(v, mapping)

    steps = tuple(QuasiRelator(s.scheme, s.part, s.group, ren_word(s.instance), s.conjugator) for s in c.steps)
    groups = tuple(Group(gr.scheme, {k: ren_val(v) for k, v in gr.substitution.items()}) for gr in c.groups)
    return Computation(steps, groups)


# --------------------------------------------------------------------------
# Generation

def generate_search(g: Grammar, sem: Term, bounds: SearchBounds, max_groups: int) -> Readings:
    rules = lexical_rules(g)
    ident = {si: sch.identifier_vars for si, sch in enumerate(g.schemes)}
    budget = _Budget(bounds)
    seen = set()
    found: dict = {}

    def dfs(items, groups, steps, substs):
        if budget.out() or len(found) >= bounds.max_results:
            return
        key = (_state_key(items, groups, len(groups)), )
        if key in seen:
            return
        seen.add(key)
        pos = next((i for i, lab in enumerate(items) if not isinstance(lab, Phon)), None)
        if pos is None:
            if all(gr is None for gr in groups):
                words = tuple(lab.token for lab in items)
                if words not in found:
                    found[words] = _steps_computation(steps, substs)
            return
        target = items[pos]
        prefix = [lab.token for lab in items[:pos]]
        for rule in rules:
            for gid, start in _candidates(g, rule, groups, max_groups):
                for s in match(rule.head, target, start):
                    if not all(isinstance(s[x], Identifier) for x in ident[rule.scheme] if x in s):
                        continue
                    new_gid = len(groups) if gid is None else gid
                    needed = set().union(*(_pattern_vars(p) for p in rule.tail)) if rule.tail else set()
                    s2 = _bind_fresh(needed - set(s), s, new_gid, ident[rule.scheme])
                    if s2 is None or not _grounds_part(g, rule, s2):
                        continue
                    try:
                        inst = _instance(g, rule, s2)
                        tail = tuple(_ground(p, s2) for p in rule.tail)
                    except (ValueError, UnboundVariableError):
                        continue
                    groups2, used_gid = _apply_group(g, groups, gid, rule, s2)
                    step = (rule.scheme, rule.part, used_gid, inst, phon_word(prefix))
                    substs2 = {**substs, used_gid: {**substs.get(used_gid, {}), **s2}}
                    dfs(items[:pos] + tail + items[pos + 1:], groups2, steps + (step,), substs2)

    dfs((sem,), (), (), {})
    return Readings([Reading(sem, words, comp) for words, comp in found.items()],
                    "budget" if budget.hit else "exhausted")


def _steps_computation(steps, substs) -> Computation:
    gids: dict = {}
    qs = []
    for scheme, part, gid, inst, conj in steps:
        gids.setdefault(gid, (len(gids), scheme))
        qs.append(QuasiRelator(scheme, part, gids[gid][0], inst, conj))
    groups = [None] * len(gids)
    for raw, (gi, scheme) in gids.items():
        groups[gi] = Group(scheme, dict(substs[raw]))
    return Computation(tuple(qs), tuple(groups))
