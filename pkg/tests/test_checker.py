import random

import pytest

from hflz import corpus, hfl
from hflz.automata import make_lts, trivial_lts
from hflz.checker import (
    Game, GroundResult, Undetermined, brute_force_winner, cross_check, denotational_bounds,
    denotational_check, dump_game, eval_hflz, ground_game, random_game, solve, verdict_of, winner,
)
from hflz.checker.denot import semantic_function
from hflz.checker.game import Interval, interval_arith, interval_pred
from hflz.config import CheckerConfig, DenotConfig, GameConfig

L0 = trivial_lts()


# -- parity games ------------------------------------------------------------

def test_simple_game():
    g = Game()
    a = g.add(0, 2)
    b = g.add(1, 1)
    g.edge(a, a)
    g.edge(a, b)
    g.edge(b, b)
    assert winner(g, a) == 0   # 0 stays on the even self-loop
    assert winner(g, b) == 1


def test_dead_ends():
    g = Game()
    a = g.add(0, 0)   # player 0 stuck: loses
    b = g.add(1, 0)   # player 1 stuck: loses
    assert winner(g, a) == 1 and winner(g, b) == 0


def test_zielonka_vs_bruteforce():
    rng = random.Random(1)
    for _ in range(300):
        g = random_game(rng, rng.randint(1, 7))
        w0, w1 = solve(g)
        assert w0 | w1 == set(range(len(g))) and not w0 & w1
        for v in range(len(g)):
            assert (v in w0) == (brute_force_winner(g, v) == 0)


# -- denotational ------------------------------------------------------------

def test_reference_sets():
    assert denotational_check(corpus.lts_file(), corpus.phi_file()) == {"q0"}
    assert denotational_check(corpus.lts_1(), corpus.phi_ab_c()) == {"q0", "q2"}
    assert denotational_check(corpus.lts_1(), corpus.phi_even_c0()) == {"q2"}


def test_phi_ab_as_function():
    # the meaning of phi_ab on L_1 is a monotone map on sets of states
    val, sem = semantic_function(corpus.lts_1(), corpus.phi_ab())
    dom = sem.domain(hfl.PROP)
    assert len(val) == len(dom)
    assert all(sem.leq(hfl.PROP, val[i], val[j])
               for i in range(len(dom)) for j in range(len(dom)) if sem.leq(hfl.PROP, dom[i], dom[j]))


def test_window_bounds_converge():
    lo, hi = denotational_bounds(corpus.lts_file_end(), hfl.parse_formula("true"))
    assert lo == hi
    # mu X. \n. X (n + 1) has no finite unfolding: lower bound false, upper true
    f = hfl.parse_formula("(mu X. \\n:int. X (n + 1)) 0")
    lo, hi = denotational_bounds(L0, f, DenotConfig(windows=(4,)))
    assert lo == set() and hi == {"q0"}
    with pytest.raises(Undetermined):
        denotational_check(L0, f, DenotConfig(windows=(4,)))


# -- game backend ------------------------------------------------------------

@pytest.mark.parametrize("n,kind", [(0, "valid"), (2, "valid"), (-1, "invalid"), (-5, "invalid")])
def test_file_end(n, kind):
    assert eval_hflz(corpus.lts_file_end(), corpus.hes_file_end(n)).kind == kind


def test_unbounded_recursion_gives_invalid_for_mu():
    f = hfl.parse_formula("(mu X. \\n:int. X (n + 1)) 0")
    assert eval_hflz(L0, f).kind == "invalid"
    g = hfl.parse_formula("(nu X. \\n:int. X (n + 1)) 0")
    assert eval_hflz(L0, g).kind == "valid"


def test_intervals():
    assert interval_arith("+", Interval(0, 2), Interval(1, 1)) == Interval(1, 3)
    assert interval_pred("<", (Interval(0, 2), Interval(5, 5))) is True
    assert interval_pred(">", (Interval(0, 2), Interval(5, 5))) is False
    assert interval_pred("=", (Interval(0, 2), Interval(1, 1))) is None
    assert interval_pred("even", (Interval(4, 4),)) is True
    inf = float("inf")
    assert interval_arith("*", Interval(0, 0), Interval(-inf, inf)) == Interval(0, 0)


def test_dump_game():
    res, stable, _ = ground_game(corpus.lts_file(), hfl.formula_to_hes(corpus.phi_file()), 1000)
    assert isinstance(res, GroundResult) and stable and res.complete
    text = dump_game(res)
    lines = text.splitlines()
    assert lines[0].startswith("init ")
    assert len(lines) == len(res.game) + 1


def test_game_small_for_file_n1():
    res, _, _ = ground_game(corpus.lts_file_end(), hfl.normalize_hes(corpus.hes_file_end(1)), 1000)
    assert res.complete and len(res.game) <= 30
    # acyclic: a topological order exists
    indeg = [0] * len(res.game)
    for u in range(len(res.game)):
        for v in res.game.succ[u]:
            indeg[v] += 1
    todo = [u for u, d in enumerate(indeg) if d == 0]
    seen = 0
    while todo:
        u = todo.pop()
        seen += 1
        for v in res.game.succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                todo.append(v)
    assert seen == len(res.game)
    w0, _ = solve(res.game)
    assert res.init in w0


def test_budget_exhaustion_is_unknown():
    h = hfl.parse_hes("F (n:int) =mu F (n + 1) \\/ F (n - 1) \\/ (n = 1000);\nmain: F 0;\n")
    cfg = GameConfig(budget=50, concrete_schedule=(50,), interval_first=50, concrete_late=())
    v = eval_hflz(L0, h, config=cfg)
    assert v.kind in ("unknown", "valid")
    assert v.kind != "invalid"


def test_cross_check_and_backends():
    L = corpus.lts_1()
    r = cross_check(L, corpus.phi_ab_c())
    assert r.agree and r.denotational and r.game.kind == "valid"
    for backend in ("auto", "denot", "game"):
        assert verdict_of(L, corpus.phi_ab_c(), backend).kind == "valid"
    with pytest.raises(ValueError):
        verdict_of(L, corpus.phi_ab_c(), "nope")


def test_auto_falls_back_to_game():
    # the function tables for F are too large for the configured cap
    cfg = CheckerConfig(denot=DenotConfig(domain_cap=100))
    assert verdict_of(corpus.lts_file_end(), corpus.hes_file_end(3), "auto", cfg).kind == "valid"
    assert verdict_of(corpus.lts_file_end(), corpus.hes_file_end(3), "denot", cfg).kind == "unknown"


def test_state_dependent_box():
    L = make_lts(["s", "t", "u"], [("s", "a", "t"), ("s", "a", "u"), ("t", "b", "t")], "s")
    f = hfl.parse_formula("[a]<b>true")
    assert denotational_check(L, f) == {"t", "u"}
    assert eval_hflz(L, f).kind == "invalid"
    assert eval_hflz(L, hfl.parse_formula("<a><b>true")).kind == "valid"
