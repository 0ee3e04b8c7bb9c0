"""Reduced words in the free group over phonological and logical generators."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .term import Term, TermSyntaxError, is_ground, parse_term


@dataclass(frozen=True)
class Phon:
    """A phonological generator (a surface word token)."""
    token: str

    def __post_init__(self):
        if not self.token or any(c.isspace() for c in self.token) or '"' in self.token:
            raise ValueError(f"bad phonological token {self.token!r}")

    def __str__(self):
        return f'"{self.token}"'


# A generator is either a phonological token or a ground logical term.
Generator = Union[Phon, Term]


def is_phonological(g: Generator) -> bool:
    return isinstance(g, Phon)


@dataclass(frozen=True)
class Atom:
    generator: Generator
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def inverse(self) -> "Atom":
        return Atom(self.generator, -self.sign)

    def __str__(self):
        return f"{self.generator}^-1" if self.sign < 0 else str(self.generator)


def cancels(a: Atom, b: Atom) -> bool:
    return a.sign == -b.sign and a.generator == b.generator


@dataclass(frozen=True)
class Word:
    """An element of the free group: a reduced tuple of atoms (empty = 1)."""
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for x, y in zip(self.atoms, self.atoms[1:]):
            if cancels(x, y):
                raise ValueError(f"word is not reduced at {x} {y}")

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __getitem__(self, i):
        return self.atoms[i]

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __str__(self):
        return " ".join(map(str, self.atoms)) if self.atoms else "1"

    def __repr__(self):
        return f"Word({str(self)!r})"


ONE = Word()


def reduce(raw: Iterable[Atom]) -> Word:
    """Free reduction with a stack; the result does not depend on the order."""
    stack: list = []
    for a in raw:
        if stack and cancels(stack[-1], a):
            stack.pop()
        else:
            stack.append(a)
    return Word(tuple(stack))


def multiply(u: Word, v: Word) -> Word:
    # only the seam can cancel
    i, j = len(u.atoms), 0
    while i > 0 and j < len(v.atoms) and cancels(u.atoms[i - 1], v.atoms[j]):
        i -= 1
        j += 1
    return Word(u.atoms[:i] + v.atoms[j:])


def product(words: Iterable[Word]) -> Word:
    out = ONE
    for w in words:
        out = multiply(out, w)
    return out


def invert(w: Word) -> Word:
    return Word(tuple(a.inverse() for a in reversed(w.atoms)))


def conjugate(w: Word, u: Word) -> Word:
    """``u w u^-1``."""
    return multiply(multiply(u, w), invert(u))


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) <= 1 or not cancels(w.atoms[0], w.atoms[-1])


def cyclic_reduce(w: Word) -> tuple:
    """Return ``(core, conjugator)`` with ``w == conjugate(core, conjugator)``."""
    i, j = 0, len(w)
    while j - i >= 2 and cancels(w.atoms[i], w.atoms[j - 1]):
        i += 1
        j -= 1
    return Word(w.atoms[i:j]), Word(w.atoms[:i])


def cyclic_permutations(w: Word) -> list:
    if not is_cyclically_reduced(w):
        raise ValueError(f"{w} is not cyclically reduced")
    if not w.atoms:
        return [ONE]
    return [Word(w.atoms[k:] + w.atoms[:k]) for k in range(len(w))]


def is_cyclic_permutation(u: Word, v: Word) -> bool:
    if len(u) != len(v):
        return False
    if not u.atoms:
        return True
    doubled = v.atoms + v.atoms
    n = len(u)
    return any(doubled[k:k + n] == u.atoms for k in range(n))


# --------------------------------------------------------------------------
# Text syntax

def split_atoms(text: str) -> list:
    """Split word text into ``(body, sign)`` tokens at depth-0 whitespace.

    Bodies keep their quotes so callers can tell phonological atoms apart.
    """
    out = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        start = i
        if text[i] == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise TermSyntaxError("unterminated quote", text, i)
            i = end + 1
        else:
            depth = 0
            while i < n and (depth > 0 or not text[i].isspace()) and not (depth == 0 and text.startswith("^", i)):
                if text[i] in "([":
                    depth += 1
                elif text[i] in ")]":
                    depth -= 1
                    if depth < 0:
                        raise TermSyntaxError("unbalanced bracket", text, i)
                i += 1
            if depth:
                raise TermSyntaxError("unbalanced bracket", text, start)
        body = text[start:i]
        sign = 1
        m = re.compile(r"\^(-?1)").match(text, i)
        if m:
            sign = int(m.group(1))
            i = m.end()
        elif text.startswith("^", i):
            raise TermSyntaxError("exponent must be ^-1 or ^1", text, i)
        out.append((body, sign))
    return out


def parse_generator(body: str) -> Generator:
    if body.startswith('"'):
        return Phon(body[1:-1])
    t = parse_term(body)
    if not is_ground(t):
        raise ValueError(f"logical atom {body!r} is not ground")
    return t


def parse_word(text: str) -> Word:
    """Parse e.g. ``i(s(j,l),p) "paris"^-1 "in"^-1`` (``1`` is the empty word)."""
    if text.strip() == "1":
        return ONE
    return reduce(Atom(parse_generator(body), sign) for body, sign in split_atoms(text))


def phon_word(tokens: Sequence[str], sign: int = 1) -> Word:
    """``w1 w2 ... wn`` (sign +1) as a word of phonological atoms."""
    return Word(tuple(Atom(Phon(t), sign) for t in tokens))
