"""Logical-form terms, substitution and restricted second-order matching.

Terms are immutable values. Ground terms are built from constants,
compounds and argument identifiers (``$x``). Schemes may additionally
contain meta-variables (uppercase names) and abstraction applications
``P[X]`` whose abstraction ``P`` is bound to an :class:`Abstraction`.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union


class TermSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class UnboundVariableError(KeyError):
    pass


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple

    def __str__(self):
        return f"{self.functor}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Identifier:
    """Argument identifier such as ``$x``. Always ground."""
    name: str

    def __str__(self):
        return f"${self.name}"


@dataclass(frozen=True)
class MetaVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class AbsApp:
    """``P[X]``: abstraction meta-variable applied to an identifier slot.

    ``arg`` is a :class:`MetaVar` (identifier meta-variable) or a ground
    :class:`Identifier`.
    """
    abs_var: str
    arg: Union[MetaVar, Identifier]

    def __str__(self):
        return f"{self.abs_var}[{self.arg}]"


@dataclass(frozen=True)
class Hole:
    """Placeholder bound by an :class:`Abstraction`; never parsed from text."""

    def __str__(self):
        return "_"


HOLE = Hole()

Term = Union[Constant, Compound, Identifier, MetaVar, AbsApp, Hole]


@dataclass(frozen=True)
class Abstraction:
    body: Term

    def __str__(self):
        return f"\\z.{_show_with_z(self.body)}"


def _show_with_z(t: Term) -> str:
    if isinstance(t, Hole):
        return "z"
    if isinstance(t, Compound):
        return f"{t.functor}({','.join(_show_with_z(a) for a in t.args)})"
    return str(t)


# Values of a substitution: ground terms for meta-variables, abstractions
# for the ``P`` of ``P[X]``.
Substitution = Mapping[str, Union[Term, Abstraction]]


# --------------------------------------------------------------------------
# Parsing

_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise TermSyntaxError(message, self.text, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def name(self) -> str:
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a name")
        self.pos = m.end()
        return m.group()

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def term(self) -> Term:
        self.skip_ws()
        if self.peek() == "$":
            self.pos += 1
            return Identifier(self.name())
        start = self.pos
        name = self.name()
        if name[0].isupper():
            if self.peek() == "[":
                self.pos += 1
                self.skip_ws()
                if self.peek() == "$":
                    self.pos += 1
                    arg: Union[MetaVar, Identifier] = Identifier(self.name())
                else:
                    arg_name = self.name()
                    if not arg_name[0].isupper():
                        self.error("abstraction argument must be a meta-variable or identifier")
                    arg = MetaVar(arg_name)
                self.skip_ws()
                if self.peek() != "]":
                    self.error("expected ']'")
                self.pos += 1
                return AbsApp(name, arg)
            return MetaVar(name)
        if not (name[0].islower() or name[0].isdigit()):
            self.pos = start
            self.error("constants and functors start lowercase")
        if self.peek() == "(":
            self.pos += 1
            args = [self.term()]
            self.skip_ws()
            while self.peek() == ",":
                self.pos += 1
                args.append(self.term())
                self.skip_ws()
            if self.peek() != ")":
                self.error("expected ',' or ')'")
            self.pos += 1
            return Compound(name, tuple(args))
        return Constant(name)


def parse_term(text: str) -> Term:
    """Parse term text: ``j``, ``s(A,B)``, ``$x``, ``ev(N,X,P[X])``."""
    p = _TermParser(text)
    t = p.term()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return t


# --------------------------------------------------------------------------
# Inspection

def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Compound):
        for a in t.args:
            yield from subterms(a)


def is_ground(t: Term) -> bool:
    return not any(isinstance(s, (MetaVar, AbsApp, Hole)) for s in subterms(t))


def identifiers(t: Term) -> list:
    """Identifiers of ``t`` in order of first occurrence (no duplicates)."""
    seen = {}
    for s in subterms(t):
        if isinstance(s, Identifier):
            seen.setdefault(s, None)
        elif isinstance(s, AbsApp) and isinstance(s.arg, Identifier):
            seen.setdefault(s.arg, None)
    return list(seen)


def metavars(t: Term) -> set:
    """Names of all meta-variables of ``t``, including both sides of ``P[X]``."""
    out = set()
    for s in subterms(t):
        if isinstance(s, MetaVar):
            out.add(s.name)
        elif isinstance(s, AbsApp):
            out.add(s.abs_var)
            if isinstance(s.arg, MetaVar):
                out.add(s.arg.name)
    return out


def replace(t: Term, old: Term, new: Term) -> Term:
    """Replace every occurrence of subterm ``old`` by ``new``."""
    if t == old:
        return new
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(replace(a, old, new) for a in t.args))
    return t


def rename_identifiers(t: Term, mapping: Mapping[Identifier, Identifier]) -> Term:
    if isinstance(t, Identifier):
        return mapping.get(t, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(rename_identifiers(a, mapping) for a in t.args))
    return t


# --------------------------------------------------------------------------
# Substitution and abstraction

def apply_abstraction(a: Abstraction, arg: Term) -> Term:
    return replace(a.body, HOLE, arg)


def substitute(t: Term, s: Substitution) -> Term:
    if isinstance(t, MetaVar):
        if t.name not in s:
            raise UnboundVariableError(t.name)
        return s[t.name]
    if isinstance(t, AbsApp):
        if t.abs_var not in s:
            raise UnboundVariableError(t.abs_var)
        return apply_abstraction(s[t.abs_var], substitute(t.arg, s))
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(substitute(a, s) for a in t.args))
    return t


def match_first_order(pattern: Term, ground: Term, s: Optional[Substitution] = None) -> Optional[dict]:
    """Most general matcher of ``pattern`` against ``ground``, extending ``s``."""
    out = dict(s or {})
    return out if _match1(pattern, ground, out) else None


def _match1(p: Term, g: Term, s: dict) -> bool:
    if isinstance(p, MetaVar):
        if p.name in s:
            return s[p.name] == g
        s[p.name] = g
        return True
    if isinstance(p, AbsApp):
        raise TypeError("first-order matching does not handle P[X]; use match")
    if isinstance(p, Compound):
        if not (isinstance(g, Compound) and g.functor == p.functor and len(g.args) == len(p.args)):
            return False
        return all(_match1(a, b, s) for a, b in zip(p.args, g.args))
    return p == g


def match_second_order(pattern: AbsApp, ground: Term, fixed_x: Optional[Identifier] = None) -> list:
    """All ``{P: \\z.ground[x:=z], X: x}`` with ``x`` an identifier of ``ground``.

    With ``fixed_x`` only that identifier is abstracted, and a vacuous
    abstraction is allowed when it does not occur. The abstraction always
    captures every occurrence. The identity abstraction ``\\z.z`` is
    never returned: ``P`` stands for a logical form missing an argument.
    """
    if isinstance(pattern.arg, Identifier):
        if fixed_x is not None and fixed_x != pattern.arg:
            return []
        fixed_x = pattern.arg
    candidates = [fixed_x] if fixed_x is not None else identifiers(ground)
    out = []
    for x in candidates:
        if ground == x:
            continue
        s = {pattern.abs_var: Abstraction(replace(ground, x, HOLE))}
        if isinstance(pattern.arg, MetaVar):
            s[pattern.arg.name] = x
        out.append(s)
    return out


def match(pattern: Term, ground: Term, s: Optional[Substitution] = None) -> list:
    """All matchers of ``pattern`` against ``ground`` extending ``s``.

    First-order everywhere except ``P[X]`` nodes, which use
    :func:`match_second_order` with ``X`` fixed when ``s`` already binds it.
    Arguments are matched left to right so earlier siblings can fix ``X``.
    """
    results = [dict(s or {})]
    return list(_match_all(pattern, ground, results))


def _match_all(p: Term, g: Term, states: list) -> Iterator[dict]:
    for s in states:
        if isinstance(p, AbsApp):
            fixed = None
            if isinstance(p.arg, MetaVar) and p.arg.name in s:
                fixed = s[p.arg.name]
                if not isinstance(fixed, Identifier):
                    continue
            if p.abs_var in s:
                bound = s[p.abs_var]
                x = fixed if fixed is not None else (p.arg if isinstance(p.arg, Identifier) else None)
                if x is not None and apply_abstraction(bound, x) == g:
                    yield s
                continue
            for m in match_second_order(p, g, fixed):
                yield {**s, **m}
        elif isinstance(p, Compound):
            if not (isinstance(g, Compound) and g.functor == p.functor and len(g.args) == len(p.args)):
                continue
            frontier = [s]
            for a, b in zip(p.args, g.args):
                frontier = list(_match_all(a, b, frontier))
                if not frontier:
                    break
            yield from frontier
        else:
            out = dict(s)
            if _match1(p, g, out):
                yield out


# --------------------------------------------------------------------------
# Fresh identifiers

class IdentifierSupply:
    """Issues ``$x1``, ``$x2``, ... deterministically within one session."""

    def __init__(self, prefix: str = "x"):
        self.prefix = prefix
        self._counter = itertools.count(1)

    def fresh(self) -> Identifier:
        return Identifier(f"{self.prefix}{next(self._counter)}")


def fresh_identifier(state: IdentifierSupply) -> Identifier:
    return state.fresh()


def canonical_identifiers(t: Term, prefix: str = "x") -> Term:
    """Rename identifiers to ``$x1, $x2, ...`` by first occurrence."""
    mapping = {x: Identifier(f"{prefix}{i}") for i, x in enumerate(identifiers(t), 1)}
    return rename_identifiers(t, mapping)
