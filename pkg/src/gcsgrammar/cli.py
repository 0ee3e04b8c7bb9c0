"""Command-line entry point.

Exit status: 0 with at least one result, 1 without result (including a
certified non-member), 2 on usage or syntax errors, 3 when the search
budget ran out before anything was found.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import analysis, diagram, engine
from .freegroup import parse_word
from .lexicon import GrammarError, load_grammar
from .term import TermSyntaxError, parse_term

OK, NO_RESULT, USAGE, BUDGET = 0, 1, 2, 3
COMMANDS = ("parse", "generate", "check", "reduce", "diagram", "analyze")


@dataclass
class CliRequest:
    command: str
    payload: str = ""
    grammar: Optional[str] = None
    max_steps: Optional[int] = None
    budget_ms: Optional[int] = None
    max_conj: Optional[int] = None
    max_results: Optional[int] = None
    text: bool = False
    symmetric: bool = False
    morphism: str = "h"
    from_parse: Optional[str] = None
    from_check: Optional[str] = None
    reading: int = 0
    dot: Optional[str] = None
    json: Optional[str] = None

    def bounds(self) -> engine.SearchBounds:
        b = engine.SearchBounds()
        return engine.SearchBounds(
            max_steps=b.max_steps if self.max_steps is None else self.max_steps,
            max_conjugator_length=b.max_conjugator_length if self.max_conj is None else self.max_conj,
            max_results=b.max_results if self.max_results is None else self.max_results,
            deadline=b.deadline if self.budget_ms is None else self.budget_ms / 1000)


@dataclass
class CliResult:
    status: int
    stdout: str = ""
    stderr: str = ""
    files: dict = field(default_factory=dict)      # path -> text


class UsageError(ValueError):
    pass


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _grammar(req: CliRequest):
    if not req.grammar:
        raise UsageError(f"{req.command} needs -g GRAMMAR")
    g = load_grammar(req.grammar)
    return engine.symmetrize(g) if req.symmetric else g


def _readings_status(readings) -> int:
    if readings:
        return OK
    return BUDGET if readings.status == "budget" else NO_RESULT


def _parse(req: CliRequest) -> CliResult:
    g = _grammar(req)
    rs = engine.parse(g, req.payload.split(), req.bounds())
    if req.text:
        out = "".join(f"{r.sem}\n" for r in rs)
    else:
        out = _dump(engine.readings_to_json(g, req.payload, rs))
    return CliResult(_readings_status(rs), out)


def _generate(req: CliRequest) -> CliResult:
    g = _grammar(req)
    rs = engine.generate(g, parse_term(req.payload), req.bounds())
    if req.text:
        out = "".join(" ".join(r.words) + "\n" for r in rs)
    else:
        out = _dump(engine.readings_to_json(g, req.payload, rs))
    return CliResult(_readings_status(rs), out)


_CHECK_STATUS = {engine.MEMBER: OK, engine.NON_MEMBER: NO_RESULT, engine.UNKNOWN: BUDGET}


def _check(req: CliRequest) -> CliResult:
    g = _grammar(req)
    w = parse_word(req.payload)
    res = engine.check_membership(g, w, req.bounds())
    if req.text:
        lines = [f"{res.status}: {res.detail}"]
        if res.computation is not None:
            for s in res.computation.steps:
                u = s.conjugator
                lines.append(f"  ({u}) {s.instance} ({u})^-1" if u.atoms else f"  {s.instance}")
        out = "\n".join(lines) + "\n"
    else:
        doc = {"query": req.payload, "status": res.status, "detail": res.detail}
        if res.computation is not None:
            doc.update(engine.computation_to_json(g, res.computation))
        out = _dump(doc)
    return CliResult(_CHECK_STATUS[res.status], out)


def _reduce(req: CliRequest) -> CliResult:
    return CliResult(OK, f"{parse_word(req.payload)}\n")


def _diagram(req: CliRequest) -> CliResult:
    g = _grammar(req)
    if (req.from_parse is None) == (req.from_check is None):
        raise UsageError("diagram needs exactly one of --from-parse or --from-check")
    if req.from_parse is not None:
        rs = engine.parse(g, req.from_parse.split(), req.bounds())
        if not rs:
            return CliResult(_readings_status(rs), stderr="no reading\n")
        if not 0 <= req.reading < len(rs):
            raise UsageError(f"--reading must be below {len(rs)}")
        comp, query = rs[req.reading].computation, req.from_parse
    else:
        res = engine.check_membership(g, parse_word(req.from_check), req.bounds())
        if res.computation is None:
            return CliResult(_CHECK_STATUS[res.status], stderr=f"{res.status}: {res.detail}\n")
        comp, query = res.computation, req.from_check
    star = diagram.star_diagram(comp)
    seq = diagram.reduction_sequence(star)
    d = seq[-1]
    cc = diagram.check_cells(d, g)
    files = {}
    if req.dot:
        files[req.dot] = diagram.export_dot(d)
    if req.json:
        files[req.json] = diagram.export_json(d) + "\n"
    summary = {
        "query": query,
        "vertices": len(d.rotation), "edges": len(d.edges), "cells": len(d.cells),
        "folds": len(seq) - 1, "euler": diagram.euler_characteristic(d),
        "boundary": " ".join(map(str, diagram.boundary_word(d))),
        "check_cells": cc.ok, "check_reason": cc.reason,
        "files": sorted(files),
    }
    if req.text:
        out = (f"{summary['vertices']} vertices, {summary['edges']} edges, {summary['cells']} cells, "
               f"{summary['folds']} folds; boundary {summary['boundary']}; cells {'ok' if cc else cc.reason}\n")
    else:
        out = _dump(summary)
    return CliResult(OK, out, files=files)


def _analyze(req: CliRequest) -> CliResult:
    g = _grammar(req)
    m = analysis.grammar_morphism(g, req.morphism)
    if m is None:
        raise UsageError(f"grammar declares no morphism {req.morphism!r}")
    rep = analysis.check_balance(g, m)
    parts = [p for s in g.schemes for p in s.parts]
    prec = analysis.precedence_check(parts, "static")
    if req.text:
        verdict = "acyclic" if prec.acyclic else "cyclic via parts " + " ".join(map(str, prec.cycle))
        out = rep.table() + f"\nstatic precedence: {verdict}\n"
    else:
        doc = {"balance": rep.to_json(), "precedence": prec.to_json(),
               "parts": [str(p) for p in parts]}
        out = _dump(doc)
    return CliResult(OK, out)


_HANDLERS = {"parse": _parse, "generate": _generate, "check": _check,
             "reduce": _reduce, "diagram": _diagram, "analyze": _analyze}


def run(req: CliRequest) -> CliResult:
    if req.command not in _HANDLERS:
        return CliResult(USAGE, stderr=f"unknown command {req.command!r}\n")
    try:
        return _HANDLERS[req.command](req)
    except (UsageError, GrammarError, TermSyntaxError, engine.UnknownTokenError,
            engine.NotLexicalError, FileNotFoundError, ValueError) as e:
        return CliResult(USAGE, stderr=f"error: {e}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gcsgrammar", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grammar=True):
        if grammar:
            sp.add_argument("-g", "--grammar", required=True, help="grammar file or fixture name")
            sp.add_argument("--symmetric", action="store_true", help="add inverse relators first")
        sp.add_argument("--max-steps", type=int, help="maximum number of multi-relator groups")
        sp.add_argument("--max-conj", type=int, help="maximum conjugator length (bounded search)")
        sp.add_argument("--max-results", type=int)
        sp.add_argument("--budget-ms", type=int, help="wall-clock budget in milliseconds")
        sp.add_argument("--text", action="store_true", help="plain text instead of JSON")

    sp = sub.add_parser("parse", help="logical forms for a token string")
    sp.add_argument("payload", metavar="TOKENS")
    common(sp)
    sp = sub.add_parser("generate", help="token strings for a logical form")
    sp.add_argument("payload", metavar="TERM")
    common(sp)
    sp = sub.add_parser("check", help="membership of a word in the closure")
    sp.add_argument("payload", metavar="WORD")
    common(sp)
    sp = sub.add_parser("reduce", help="free reduction of a word")
    sp.add_argument("payload", metavar="WORD")
    sp = sub.add_parser("diagram", help="reduced diagram of a parse or check witness")
    common(sp)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--from-parse", metavar="TOKENS")
    src.add_argument("--from-check", metavar="WORD")
    sp.add_argument("--reading", type=int, default=0, help="which parse reading (default 0)")
    sp.add_argument("--dot", metavar="PATH")
    sp.add_argument("--json", metavar="PATH")
    sp = sub.add_parser("analyze", help="morphism balance and static precedence")
    common(sp)
    sp.add_argument("--morphism", default="h")
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    req = CliRequest(**{k: v for k, v in vars(ns).items() if k in CliRequest.__dataclass_fields__})
    res = run(req)
    for path, text in res.files.items():
        with open(path, "w") as f:
            f.write(text)
    sys.stdout.write(res.stdout)
    sys.stderr.write(res.stderr)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
