"""Command-line entry point.

Exit codes: 0 success or valid, 1 invalid, 2 unknown, 3 usage, parse or type error.
Check-like commands print a final ``RESULT valid|invalid|unknown`` line.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import replace
from typing import Optional

from . import hfl
from .automata import (
    AutomatonError, det_automaton_to_lts, parse_dfa, parse_lts, parse_parity, trivial_lts,
    check_det_automaton,
)
from .checker import DenotError, dump_game, ground_game, prepare_hes, verdict_of
from .config import CheckerConfig
from .intertype import temporal_pipeline
from .opsem import StuckError, enumerate_traces, initial_term, reduce_with_choice
from .surface import ProgramError, parse_program, show_program, show_term, typecheck_program
from .translate import (
    TranslationError, parse_priorities, translate_csa, translate_may, translate_must,
    translate_path,
)

log = logging.getLogger("hflz")

EXIT_OK, EXIT_INVALID, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3
_EXIT = {"valid": EXIT_OK, "invalid": EXIT_INVALID, "unknown": EXIT_UNKNOWN}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _program(path: str):
    p = parse_program(_read(path))
    typecheck_program(p)
    return p


def _hes_text(text: str) -> hfl.Hes:
    """An HES, or a single closed formula, which becomes a one-main system."""
    try:
        return hfl.parse_hes(text)
    except hfl.HflSyntaxError:
        try:
            f = hfl.parse_formula(text)
        except hfl.HflError:
            raise
        return hfl.Hes((), f)


def _translate(args) -> tuple:
    """Translate the program for the chosen mode; returns (hes, lts to check it on)."""
    p = _program(args.program)
    mode = args.mode
    if mode in ("may", "must"):
        if not args.event:
            raise UsageError(f"--mode {mode} needs --event")
        h = translate_may(p, args.event) if mode == "may" else translate_must(p, args.event)
        return h, trivial_lts()
    if mode == "path":
        lts = None
        if args.aut:
            A = parse_dfa(_read(args.aut))
            with warnings.catch_warnings(record=True) as ws:
                warnings.simplefilter("always")
                check_det_automaton(A)
            for w in ws:
                log.warning("%s", w.message)
            lts = det_automaton_to_lts(A)
        return translate_path(p), lts
    if mode == "csa":
        if not args.prio:
            raise UsageError("--mode csa needs --prio")
        return translate_csa(p, parse_priorities(_read(args.prio))), trivial_lts()
    if mode == "temporal":
        if not args.aut:
            raise UsageError("--mode temporal needs --aut")
        return temporal_pipeline(p, parse_parity(_read(args.aut))), trivial_lts()
    raise UsageError(f"unknown mode {mode}")


def _config(args) -> CheckerConfig:
    cfg = CheckerConfig(seed=args.seed)
    if getattr(args, "budget", None) is not None:
        cfg = replace(cfg, game=replace(cfg.game, budget=args.budget))
    return cfg


def _result(kind: str, reason: Optional[str] = None) -> int:
    if reason:
        log.info("reason: %s", reason)
    sys.stdout.write(f"RESULT {kind}\n")
    return _EXIT[kind]


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    text = _read(args.file)
    if args.hes:
        _emit(args, hfl.show_hes(_hes_text(text)))
    else:
        _emit(args, show_program(parse_program(text)))
    return EXIT_OK


def cmd_typecheck(args) -> int:
    text = _read(args.file)
    if args.hes:
        h = _hes_text(text)
        _emit(args, "".join(f"{e.name} : {hfl.show_type(e.ty)}\n" for e in h.equations))
    else:
        tys = typecheck_program(parse_program(text))
        _emit(args, "".join(f"{f} : {t}\n" for f, t in tys.items()))
    return EXIT_OK


def cmd_run(args) -> int:
    p = _program(args.program)
    r = reduce_with_choice(p, initial_term(p), args.choices, max_steps=args.depth)
    out = [f"trace {' '.join(r.trace)}".rstrip(), f"term {show_term(r.term)}"]
    if r.exhausted:
        out.append("choices exhausted")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_traces(args) -> int:
    p = _program(args.program)
    ts = enumerate_traces(p, args.depth)
    lines = []
    for tr in sorted(ts.finite, key=lambda t: (len(t), t)):
        tag = " (maximal)" if tr in ts.maximal else ""
        lines.append((" ".join(tr) or ".") + tag)
    if ts.frontier:
        lines.append(f"# {len(ts.frontier)} paths cut at depth {args.depth}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_translate(args) -> int:
    h, _ = _translate(args)
    _emit(args, hfl.show_hes(h))
    return EXIT_OK


def cmd_check(args) -> int:
    lts = parse_lts(_read(args.lts))
    h = _hes_text(_read(args.hes))
    cfg = _config(args)
    if args.dump_game:
        res, _, _ = ground_game(lts, prepare_hes(h), cfg.game.budget)
        with open(args.dump_game, "w", encoding="utf-8") as fh:
            fh.write(dump_game(res))
    v = verdict_of(lts, h, args.backend, cfg)
    return _result(v.kind, v.reason)


def cmd_verify(args) -> int:
    h, lts = _translate(args)
    if lts is None:
        raise UsageError("--mode path needs --aut")
    v = verdict_of(lts, h, args.backend, _config(args))
    return _result(v.kind, v.reason)


def cmd_dual(args) -> int:
    _emit(args, hfl.show_hes(hfl.dual_hes(_hes_text(_read(args.hes)))))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hflz", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="seed for fuzzing (the pipeline is deterministic)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("--out", help="write output here instead of stdout")

    def mode(p, positional_aut: bool):
        p.add_argument("--mode", required=True, choices=["may", "must", "path", "csa", "temporal"])
        p.add_argument("--event")
        p.add_argument("--prio", help="priority file, lines 'f <nat>'")
        if positional_aut:
            # `translate --mode path aut.dfa prog` is accepted as well as --aut
            p.add_argument("files", nargs="+", metavar="[AUT] PROGRAM")
        else:
            p.add_argument("program")
        p.add_argument("--aut", help="DFA (path) or parity automaton (temporal)")

    p = sub.add_parser("parse", help="parse and pretty-print a program (or HES with --hes)")
    p.add_argument("file")
    p.add_argument("--hes", action="store_true")
    out(p)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("typecheck", help="print inferred simple types")
    p.add_argument("file")
    p.add_argument("--hes", action="store_true")
    out(p)
    p.set_defaults(fn=cmd_typecheck)

    p = sub.add_parser("run", help="reduce following a choice sequence over L/R")
    p.add_argument("program")
    p.add_argument("--depth", type=int, default=10_000, help="maximum reduction steps")
    p.add_argument("--choices", default="", help="e.g. LRL")
    out(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("traces", help="event traces up to a number of reduction steps")
    p.add_argument("program")
    p.add_argument("--depth", type=int, default=20)
    out(p)
    p.set_defaults(fn=cmd_traces)

    p = sub.add_parser("translate", help="program to HES")
    mode(p, True)
    out(p)
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("check", help="model check an HES against an LTS")
    p.add_argument("lts")
    p.add_argument("hes", help="HES file, or - for stdin")
    p.add_argument("--backend", choices=["auto", "denot", "game"], default="auto")
    p.add_argument("--budget", type=int, help="game node budget")
    p.add_argument("--dump-game", metavar="FILE", help="write the ground game as an edge list")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("verify", help="translate and check in one go")
    mode(p, True)
    p.add_argument("--backend", choices=["auto", "denot", "game"], default="auto")
    p.add_argument("--budget", type=int)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("dual", help="De Morgan dual of an HES")
    p.add_argument("hes")
    out(p)
    p.set_defaults(fn=cmd_dual)
    return ap


def _split_files(args) -> None:
    files = getattr(args, "files", None)
    if files is None:
        return
    if len(files) == 2:
        if args.aut:
            raise UsageError("automaton given twice")
        args.aut, args.program = files
    elif len(files) == 1:
        args.program = files[0]
    else:
        raise UsageError("expected [AUT] PROGRAM")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="hflz: %(message)s", stream=sys.stderr)
    try:
        _split_files(args)
        return args.fn(args)
    except (UsageError, ProgramError, hfl.HflError, AutomatonError, TranslationError,
            DenotError) as e:
        print(f"hflz: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except StuckError as e:
        print(f"hflz: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
