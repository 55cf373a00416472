"""Tunable limits for the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class DenotConfig:
    # integer windows [-B, B] tried in turn; a window is accepted when the
    # under- and over-approximating runs agree
    windows: tuple = (8, 16, 32, 64)
    # largest semantic domain (number of elements) we are willing to enumerate
    domain_cap: int = 200_000
    # evaluation steps before giving up (None: unlimited); the auto backend
    # uses auto_steps so that it can fall back to the game quickly
    max_steps: Optional[int] = None
    auto_steps: int = 300_000


@dataclass(frozen=True)
class GameConfig:
    budget: int = 10 ** 6
    # node budgets for the successive grounding attempts (capped by budget)
    concrete_schedule: tuple = (2_000,)
    interval_first: int = 20_000
    concrete_late: tuple = (20_000, 200_000, 1_000_000)
    # distinct atoms a function-valued argument may accumulate before giving up
    max_cand: int = 12
    # exact claim nodes per skeleton in interval mode before widening
    exact_per_skeleton: int = 3


@dataclass(frozen=True)
class CheckerConfig:
    denot: DenotConfig = field(default_factory=DenotConfig)
    game: GameConfig = field(default_factory=GameConfig)
    seed: int = 0
