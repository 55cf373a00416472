"""Worked examples: the small programs, transition systems and formulas used
throughout the tests and scripts."""

from __future__ import annotations

from . import hfl
from .automata import Lts, ParityAutomaton, make_lts, make_parity, trivial_lts
from .surface import Program, parse_program

# ---------------------------------------------------------------------------
# transition systems


def lts_file() -> Lts:
    """File protocol: read any number of times, then close."""
    return make_lts(["q0", "q1"], [("q0", "read", "q0"), ("q0", "close", "q1")], "q0")


def lts_file_end() -> Lts:
    """The file protocol where termination is allowed after closing."""
    return make_lts(["q0", "q1", "q2"],
                    [("q0", "read", "q0"), ("q0", "close", "q1"), ("q1", "end", "q2")], "q0")


def lts_1(init: str = "q0") -> Lts:
    """q0 -a-> q1 -b-> q2 -c-> q1."""
    return make_lts(["q0", "q1", "q2"], [("q0", "a", "q1"), ("q1", "b", "q2"), ("q2", "c", "q1")], init)


def lts_0() -> Lts:
    return trivial_lts()


def automaton_ab() -> ParityAutomaton:
    """Accepts (a*b)*a^omega: finitely many b's.  q_a has priority 0, q_b 1."""
    trans = [(q, "a", "qa") for q in ("qa", "qb")] + [(q, "b", "qb") for q in ("qa", "qb")]
    return make_parity(["qa", "qb"], {"qa": 0, "qb": 1}, trans, "qa")


# ---------------------------------------------------------------------------
# formulas

PHI_FILE = "nu X. <close>true /\\ <read>X"
PHI_AB = "mu X. \\Y. Y \\/ <a>(X (<b>Y))"
PHI_EVEN = "nu X. \\Y. \\Z. (even(Z) /\\ Y) \\/ <a>(X (<b>Y) (Z + 1))"


def phi_file() -> hfl.Formula:
    return hfl.parse_formula(PHI_FILE)


def phi_ab() -> hfl.Formula:
    return hfl.parse_formula(PHI_AB)


def phi_ab_c() -> hfl.Formula:
    return hfl.parse_formula(f"({PHI_AB}) (<c>true)")


def phi_even_c0() -> hfl.Formula:
    return hfl.parse_formula(f"({PHI_EVEN}) (<c>true) 0")


def hes_file_end_text(n: int) -> str:
    return ("F (y:int) x k =mu (y != 0 \\/ <close>(k true)) /\\ (y = 0 \\/ <read>(F (y - 1) x k));\n"
            f"main: F ({n}) true (\\r. <end>true);\n")


def hes_file_end(n: int) -> hfl.Hes:
    """Valid on the file protocol with end iff n >= 0."""
    return hfl.parse_hes(hes_file_end_text(n))


# ---------------------------------------------------------------------------
# programs

P_LOOP = "loop x = loop x; main = loop (event a; ())"


def p_loop() -> Program:
    return parse_program(P_LOOP)


def p_sum_text(n: int) -> str:
    return ("Sum x k = if x = 0 then k 0 else Sum (x - 1) (fun r -> k (x + r));\n"
            f"main = Sum {n} (fun r -> assert(r >= {n}))\n")


def p_sum(n: int) -> Program:
    return parse_program(p_sum_text(n))


def p_loopxy_text(m: int, n: int) -> str:
    return ("loop x y = if x <= 0 || y <= 0 then (event end; ())\n"
            "           else (loop (x - 1) (y * y) <> loop x (y - 1));\n"
            f"main = loop {m} {n}\n")


def p_loopxy(m: int, n: int) -> Program:
    return parse_program(p_loopxy_text(m, n))


P_APP = """APP h x = h x;
f_b x = if x > 0 then (event a; APP f_a (x - 1)) else (event b; APP f_b 5);
f_a x = if x > 0 then (event a; APP f_a (x - 1)) else (event b; APP f_b 5);
main = f_b 5
"""
OMEGA_APP = {"APP": 3, "f_a": 1, "f_b": 2}

# the system we expect translate_csa to produce for (P_APP, OMEGA_APP);
# p => phi is written as its definition, (not p) \\/ phi
HES_APP = """APP h (x:int) =mu h x;
f_b (x:int) =nu (x <= 0 \\/ APP f_a (x - 1)) /\\ (x > 0 \\/ APP f_b 5);
f_a (x:int) =mu (x <= 0 \\/ APP f_a (x - 1)) /\\ (x > 0 \\/ APP f_b 5);
main: f_b 5;
"""


def p_app() -> Program:
    return parse_program(P_APP)


def p0_text(c: bool) -> str:
    cond = "0 = 0" if c else "0 = 1"
    return f"f = if {cond} then (event a; f) else (event b; f);\nmain = f\n"


def p0(c: bool) -> Program:
    return parse_program(p0_text(c))


P_TR = """g k = (event a; k) <> (event b; k);
f x = if x > 0 then g (f (x - 1)) else (event b; f 5);
main = f 5
"""


def p_tr() -> Program:
    return parse_program(P_TR)
