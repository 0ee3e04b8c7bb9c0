"""Quasi-relators, computations, verification and symmetrization."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from ..freegroup import ONE, Word, conjugate, is_cyclic_permutation, product
from ..lexicon import Grammar, InstantiationError, instantiate, with_inverses


@dataclass(frozen=True)
class QuasiRelator:
    """``conjugator · instance · conjugator^-1`` for one part of one scheme."""
    scheme: int
    part: int
    group: int
    instance: Word
    conjugator: Word = ONE

    @property
    def value(self) -> Word:
        return conjugate(self.instance, self.conjugator)


@dataclass(frozen=True)
class Group:
    """One multi-relator instance: the scheme and its grounding substitution."""
    scheme: int
    substitution: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class Computation:
    steps: tuple = ()
    groups: tuple = ()

    def __len__(self):
        return len(self.steps)

    def conjugated(self, u: Word) -> "Computation":
        """Every step conjugated by ``u``: the result becomes ``u result u^-1``."""
        steps = tuple(replace(s, conjugator=u * s.conjugator) for s in self.steps)
        return Computation(steps, self.groups)


EMPTY = Computation()


@dataclass(frozen=True)
class SearchBounds:
    max_steps: int = 12               # multi-relator groups
    max_conjugator_length: int = 2
    max_results: int = 100
    deadline: Optional[float] = 2.0    # seconds of wall clock; None = unlimited

    def __post_init__(self):
        if self.max_steps < 0 or self.max_conjugator_length < 0 or self.max_results <= 0:
            raise ValueError("bounds must be non-negative")


def result_of(c: Computation) -> Word:
    return product(s.value for s in c.steps)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify(g: Grammar, c: Computation, claimed: Word) -> Verdict:
    """Check ``c`` against ``g``'s schemes and that its result is ``claimed``."""
    by_group: dict = {}
    for i, s in enumerate(c.steps):
        if not 0 <= s.group < len(c.groups):
            return Verdict(False, f"step {i} refers to missing group {s.group}")
        grp = c.groups[s.group]
        if grp.scheme != s.scheme:
            return Verdict(False, f"step {i} scheme differs from its group's")
        by_group.setdefault(s.group, []).append(s)
    for gi, grp in enumerate(c.groups):
        if not 0 <= grp.scheme < len(g.schemes):
            return Verdict(False, f"group {gi} refers to missing scheme {grp.scheme}")
        scheme = g.schemes[grp.scheme]
        try:
            instances = instantiate(scheme, grp.substitution)
        except InstantiationError as e:
            return Verdict(False, f"group {gi}: {e}")
        steps = by_group.get(gi, [])
        used = sorted(s.part for s in steps)
        if used != list(range(len(scheme.parts))):
            return Verdict(False, f"group {gi} is incomplete or repeats parts: {used}")
        for s in steps:
            if not is_cyclic_permutation(s.instance, instances[s.part]):
                return Verdict(False, f"group {gi} part {s.part}: {s.instance} is not an instance of {instances[s.part]}")
    res = result_of(c)
    if res != claimed:
        return Verdict(False, f"product is {res}, not {claimed}")
    return Verdict(True)


def symmetrize(g: Grammar) -> Grammar:
    """Add the inverse of every multi-relator (each part inverted)."""
    return replace(g, schemes=with_inverses(g.schemes), symmetric=True)


def computation_to_json(g: Grammar, c: Computation) -> dict:
    return {
        "computation": [
            {"scheme": str(g.schemes[s.scheme]), "scheme_index": s.scheme, "part": s.part,
             "group": s.group, "instance": str(s.instance),
             "substitution": {k: str(v) for k, v in sorted(c.groups[s.group].substitution.items())},
             "conjugator": str(s.conjugator)}
            for s in c.steps],
        "groups": [
            {"scheme": grp.scheme, "steps": [i for i, s in enumerate(c.steps) if s.group == gi],
             "substitution": {k: str(v) for k, v in sorted(grp.substitution.items())}}
            for gi, grp in enumerate(c.groups)],
    }
