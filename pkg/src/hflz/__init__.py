"""Higher-order modal fixpoint logic with integers: a small functional language,
program-to-HES translations and model checkers for the resulting formulas."""

from . import hfl
from .automata import (
    DetAutomaton, Lts, ParityAutomaton, det_automaton_to_lts, make_lts, make_parity, parse_dfa,
    parse_lts, parse_parity, trivial_lts,
)
from .checker import INVALID, VALID, Verdict, cross_check, denotational_check, eval_hflz, verdict_of
from .config import CheckerConfig, DenotConfig, GameConfig
from .hfl import Hes, dual_hes, parse_formula, parse_hes, show, show_hes
from .intertype import infer_intersection_transform, temporal_pipeline
from .opsem import enumerate_traces, must_reach_bounded, reduce_with_choice
from .surface import Program, parse_program, show_program, typecheck_program
from .translate import translate_csa, translate_may, translate_must, translate_path

__version__ = "0.1.0"

__all__ = [
    "CheckerConfig", "DenotConfig", "DetAutomaton", "GameConfig", "Hes", "INVALID", "Lts",
    "ParityAutomaton", "Program", "VALID", "Verdict", "cross_check", "denotational_check",
    "det_automaton_to_lts", "dual_hes", "enumerate_traces", "eval_hflz", "hfl",
    "infer_intersection_transform", "make_lts", "make_parity", "must_reach_bounded",
    "parse_dfa", "parse_formula", "parse_hes", "parse_lts", "parse_parity", "parse_program",
    "reduce_with_choice", "show", "show_hes", "show_program", "temporal_pipeline",
    "translate_csa", "translate_may", "translate_must", "translate_path", "trivial_lts",
    "typecheck_program", "verdict_of",
]
