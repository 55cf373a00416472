"""Model checkers for HFL_Z: denotational (exact, pure HFL) and parity-game based."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .. import hfl
from ..automata import Lts
from ..config import CheckerConfig
from .denot import DenotError, DomainTooLarge, Undetermined, denotational_bounds, denotational_check
from .game import (
    INVALID, VALID, GroundResult, NotGround, Verdict, Unknown, dump_game, eval_hflz, ground_game,
    prepare_hes,
)
from .parity import Game, brute_force_winner, random_game, solve, winner


@dataclass
class CrossCheckReport:
    agree: bool
    denotational: bool
    game: Verdict
    witness: Optional[hfl.Formula] = None  # smallest closed subformula that disagrees

    def __str__(self):
        s = f"denotational={'valid' if self.denotational else 'invalid'} game={self.game}"
        if not self.agree:
            s += " MISMATCH"
            if self.witness is not None:
                s += f" at {hfl.show(self.witness)}"
        return s


def _agree(d: bool, v: Verdict) -> bool:
    return not v.decided or (v.kind == "valid") == d


def _closed_props(f: hfl.Formula) -> list:
    out = []
    for g in hfl.subformulas(f):
        if hfl.free_vars(g):
            continue
        try:
            if hfl.typecheck_formula({}, g) == hfl.PROP:
                out.append(g)
        except hfl.HflError:
            continue
    out.sort(key=lambda g: len(hfl.show(g)))
    return out


def cross_check(lts: Lts, h, config: CheckerConfig = CheckerConfig()) -> CrossCheckReport:
    """Compare both backends at the initial state.

    An Unknown from the game backend is not a disagreement.
    """
    f = h if isinstance(h, hfl.Formula) else hfl.hes_to_formula(h)
    d = lts.init in denotational_check(lts, f, config.denot)
    v = eval_hflz(lts, f, config=config.game)
    if _agree(d, v):
        return CrossCheckReport(True, d, v)
    witness = None
    for g in _closed_props(f):
        gd = lts.init in denotational_check(lts, g, config.denot)
        if not _agree(gd, eval_hflz(lts, g, config=config.game)):
            witness = g
            break
    return CrossCheckReport(False, d, v, witness)


def verdict_of(lts: Lts, h, backend: str = "auto", config: CheckerConfig = CheckerConfig()) -> Verdict:
    """Check h at lts.init with the chosen backend ("denot", "game" or "auto")."""
    if backend == "game":
        return eval_hflz(lts, h, config=config.game)
    if backend in ("denot", "auto"):
        dc = config.denot
        if backend == "auto" and dc.max_steps is None:
            dc = replace(dc, max_steps=dc.auto_steps)
        try:
            states = denotational_check(lts, h, dc)
            return VALID if lts.init in states else INVALID
        except (DomainTooLarge, Undetermined) as e:
            if backend == "denot":
                return Unknown("budget")
        return eval_hflz(lts, h, config=config.game)
    raise ValueError(f"unknown backend {backend}")


__all__ = [
    "CrossCheckReport", "DenotError", "DomainTooLarge", "Game", "GroundResult", "INVALID",
    "NotGround", "Undetermined", "Unknown", "VALID", "Verdict", "brute_force_winner",
    "cross_check", "denotational_bounds", "denotational_check", "dump_game", "eval_hflz",
    "ground_game", "prepare_hes", "random_game", "solve", "verdict_of", "winner",
]
