"""Grammar files: relator schemes, multi-relator schemes and the acceptor."""
from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Union

from .freegroup import Atom, Phon, Word, is_cyclically_reduced, split_atoms
from .term import (AbsApp, Compound, Identifier, MetaVar, Substitution, Term,
                   UnboundVariableError, metavars, parse_term,
                   subterms, substitute)


class GrammarError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class InstantiationError(ValueError):
    pass


@dataclass(frozen=True)
class SchemeAtom:
    label: Union[Phon, Term]
    sign: int = 1

    def inverse(self) -> "SchemeAtom":
        return SchemeAtom(self.label, -self.sign)

    def __str__(self):
        return f"{self.label}^-1" if self.sign < 0 else str(self.label)


@dataclass(frozen=True)
class RelatorScheme:
    atoms: tuple

    def inverse(self) -> "RelatorScheme":
        return RelatorScheme(tuple(a.inverse() for a in reversed(self.atoms)))

    def metavars(self) -> set:
        out = set()
        for a in self.atoms:
            if not isinstance(a.label, Phon):
                out |= metavars(a.label)
        return out

    def positive(self) -> list:
        return [i for i, a in enumerate(self.atoms) if a.sign > 0]

    def __len__(self):
        return len(self.atoms)

    def __str__(self):
        return " ".join(map(str, self.atoms))


@dataclass(frozen=True)
class MultiRelatorScheme:
    """A multiset of parts sharing one meta-variable scope."""
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise GrammarError("empty multi-relator")

    @property
    def identifier_vars(self) -> frozenset:
        """Meta-variables used as the argument of some ``P[X]``: they bind identifiers."""
        out = set()
        for p in self.parts:
            for a in p.atoms:
                if isinstance(a.label, Phon):
                    continue
                for s in subterms(a.label):
                    if isinstance(s, AbsApp) and isinstance(s.arg, MetaVar):
                        out.add(s.arg.name)
        return frozenset(out)

    def metavars(self) -> set:
        return set().union(*(p.metavars() for p in self.parts))

    def is_ground(self) -> bool:
        return not self.metavars()

    def inverse(self) -> "MultiRelatorScheme":
        return MultiRelatorScheme(tuple(p.inverse() for p in self.parts))

    def canonical(self) -> tuple:
        """Order-independent key (parts form a multiset)."""
        return tuple(sorted(str(p) for p in self.parts))

    def __str__(self):
        if len(self.parts) == 1:
            return f"relator: {self.parts[0]}"
        return "multi: " + " ; ".join(map(str, self.parts))


def free_identifiers(t: Term, binders: frozenset) -> set:
    """Identifiers of ``t`` with an occurrence outside every binder for them.

    A binder is ``(functor, arity, k)``: a compound of that shape binds the
    identifier sitting in its argument ``k`` throughout its subterm.
    """
    free = set()

    def walk(u, bound):
        if isinstance(u, Identifier):
            if u not in bound:
                free.add(u)
        elif isinstance(u, Compound):
            inner = bound
            for f, n, k in binders:
                if u.functor == f and len(u.args) == n and isinstance(u.args[k], Identifier):
                    inner = inner | {u.args[k]}
            for a in u.args:
                walk(a, inner)

    walk(t, frozenset())
    return free


@dataclass(frozen=True)
class AcceptorPattern:
    """Public results ``S W_n^-1 ... W_1^-1`` with ``S`` free of unbound identifiers."""
    binders: frozenset = frozenset()

    def accepts(self, w: Word):
        return accepts(self, w)


def accepts(a: AcceptorPattern, w: Word):
    """Return ``(sem, tokens)`` if ``w`` has the public shape, else ``None``."""
    if not w.atoms:
        return None
    head, tail = w.atoms[0], w.atoms[1:]
    if head.sign < 0 or isinstance(head.generator, Phon):
        return None
    if free_identifiers(head.generator, a.binders):
        return None
    if not all(x.sign < 0 and isinstance(x.generator, Phon) for x in tail):
        return None
    return head.generator, [x.generator.token for x in reversed(tail)]


@dataclass(frozen=True)
class Grammar:
    phon: frozenset
    schemes: tuple
    acceptor: AcceptorPattern = AcceptorPattern()
    morphisms: tuple = ()          # (name, ((key, value), ...)) declarations
    symmetric: bool = False
    name: str = ""

    def morphism_options(self, name: str) -> Optional[dict]:
        for n, opts in self.morphisms:
            if n == name:
                return dict(opts)
        return None


# --------------------------------------------------------------------------
# Instantiation

def instantiate(scheme: MultiRelatorScheme, s: Substitution) -> list:
    """Ground every part of ``scheme`` under ``s``; one cyclically reduced word per part."""
    for x in scheme.identifier_vars:
        if x in s and not isinstance(s[x], Identifier):
            raise InstantiationError(f"{x} must be bound to an identifier, got {s[x]}")
    out = []
    for part in scheme.parts:
        atoms = []
        for a in part.atoms:
            if isinstance(a.label, Phon):
                atoms.append(Atom(a.label, a.sign))
            else:
                try:
                    atoms.append(Atom(substitute(a.label, s), a.sign))
                except UnboundVariableError as e:
                    raise InstantiationError(f"unbound meta-variable {e.args[0]}") from None
        try:
            w = Word(tuple(atoms))
        except ValueError:
            raise InstantiationError(f"instance of {part} is not reduced") from None
        if not is_cyclically_reduced(w):
            raise InstantiationError(f"instance {w} of {part} is not cyclically reduced")
        out.append(w)
    return out


# --------------------------------------------------------------------------
# Grammar file syntax

def _parse_part(text: str, line: int) -> RelatorScheme:
    atoms = []
    try:
        for body, sign in split_atoms(text):
            if body.startswith('"'):
                atoms.append(SchemeAtom(Phon(body[1:-1]), sign))
            else:
                atoms.append(SchemeAtom(parse_term(body), sign))
    except ValueError as e:
        raise GrammarError(str(e), line) from None
    if not atoms:
        raise GrammarError("empty relator part", line)
    return RelatorScheme(tuple(atoms))


def _split_parts(text: str) -> list:
    parts, depth, cur = [], 0, []
    quoted = False
    for ch in text:
        if ch == '"':
            quoted = not quoted
        elif not quoted and ch in "([":
            depth += 1
        elif not quoted and ch in ")]":
            depth -= 1
        if ch == ";" and depth == 0 and not quoted:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _symbolically_cyclically_reduced(part: RelatorScheme) -> bool:
    n = len(part.atoms)
    if n <= 1:
        return True
    return not any(
        part.atoms[i].label == part.atoms[(i + 1) % n].label
        and part.atoms[i].sign == -part.atoms[(i + 1) % n].sign
        for i in range(n))


def validate_scheme(scheme: MultiRelatorScheme, phon: frozenset, line: Optional[int] = None):
    for part in scheme.parts:
        if not _symbolically_cyclically_reduced(part):
            raise GrammarError(f"relator part '{part}' is not cyclically reduced", line)
        for a in part.atoms:
            if isinstance(a.label, Phon) and a.label.token not in phon:
                raise GrammarError(f"undeclared token \"{a.label.token}\"", line)
    plain = set()
    for part in scheme.parts:
        for a in part.atoms:
            if isinstance(a.label, Phon):
                continue
            for s in subterms(a.label):
                if isinstance(s, MetaVar):
                    plain.add(s.name)
    for x in scheme.identifier_vars:
        if x not in plain:
            raise GrammarError(f"abstraction argument {x} is not shared by the multi-relator", line)


def binders_of(schemes) -> frozenset:
    out = set()
    for sch in schemes:
        xs = sch.identifier_vars
        for part in sch.parts:
            for a in part.atoms:
                if isinstance(a.label, Phon):
                    continue
                for s in subterms(a.label):
                    if isinstance(s, Compound):
                        for k, arg in enumerate(s.args):
                            if isinstance(arg, MetaVar) and arg.name in xs:
                                out.add((s.functor, len(s.args), k))
    return frozenset(out)


def parse_grammar(text: str, name: str = "") -> Grammar:
    phon: set = set()
    pending = []
    morphisms = []
    symmetric = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise GrammarError(f"expected 'keyword: ...', got {line!r}", lineno)
        key, rest = key.strip(), rest.strip()
        if key == "phon":
            for tok in rest.split():
                try:
                    Phon(tok)
                except ValueError as e:
                    raise GrammarError(str(e), lineno) from None
                phon.add(tok)
        elif key == "relator":
            pending.append((MultiRelatorScheme((_parse_part(rest, lineno),)), lineno))
        elif key == "multi":
            parts = tuple(_parse_part(p, lineno) for p in _split_parts(rest))
            pending.append((MultiRelatorScheme(parts), lineno))
        elif key == "accept":
            if rest != "public":
                raise GrammarError(f"unknown acceptor {rest!r}", lineno)
        elif key == "morphism":
            fields = rest.split()
            if not fields:
                raise GrammarError("morphism needs a name", lineno)
            opts = []
            for f in fields[1:]:
                k, eq, v = f.partition("=")
                try:
                    opts.append((k, int(v)))
                except ValueError:
                    raise GrammarError(f"bad morphism option {f!r}", lineno) from None
                if not eq:
                    raise GrammarError(f"bad morphism option {f!r}", lineno)
            morphisms.append((fields[0], tuple(opts)))
        elif key == "option":
            if rest != "symmetric":
                raise GrammarError(f"unknown option {rest!r}", lineno)
            symmetric = True
        else:
            raise GrammarError(f"unknown keyword {key!r}", lineno)
    phon_f = frozenset(phon)
    for sch, lineno in pending:
        validate_scheme(sch, phon_f, lineno)
    schemes = tuple(s for s, _ in pending)
    if symmetric:
        schemes = with_inverses(schemes)
    return Grammar(phon=phon_f, schemes=schemes, acceptor=AcceptorPattern(binders_of(schemes)),
                   morphisms=tuple(morphisms), symmetric=symmetric, name=name)


def with_inverses(schemes) -> tuple:
    """``schemes`` followed by the inverse of each one not already present."""
    seen = {s.canonical() for s in schemes}
    out = list(schemes)
    for s in schemes:
        inv = s.inverse()
        if inv.canonical() not in seen:
            seen.add(inv.canonical())
            out.append(inv)
    return tuple(out)


def print_grammar(g: Grammar) -> str:
    lines = []
    if g.phon:
        lines.append("phon: " + " ".join(sorted(g.phon)))
    lines.extend(str(s) for s in g.schemes)
    lines.append("accept: public")
    for name, opts in g.morphisms:
        lines.append(" ".join(["morphism:", name] + [f"{k}={v}" for k, v in opts]))
    if g.symmetric:
        lines.append("option: symmetric")
    return "\n".join(lines) + "\n"


FIXTURES = ("g-grammar", "g-grammar-prime", "abc", "cfg-chart", "preorder")


def load_grammar(path: str) -> Grammar:
    """Load a grammar file, or a shipped fixture by name (``g-grammar``, ``abc.gcs``, ...)."""
    if os.path.exists(path):
        with open(path) as f:
            return parse_grammar(f.read(), name=os.path.basename(path))
    stem = path[:-4] if path.endswith(".gcs") else path
    if stem in FIXTURES:
        text = resources.files("gcsgrammar.grammars").joinpath(stem + ".gcs").read_text()
        return parse_grammar(text, name=stem + ".gcs")
    raise FileNotFoundError(path)
