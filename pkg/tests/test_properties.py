"""Randomized suites: backends against each other and against the operational semantics."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from hflz import hfl
from hflz.automata import trivial_lts
from hflz.checker import brute_force_winner, cross_check, eval_hflz, random_game, solve
from hflz.gen import random_hes, random_lts, random_program
from hflz.opsem import enumerate_traces
from hflz.surface import parse_program, show_program
from hflz.translate import translate_may, translate_must, translate_path

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
L0 = trivial_lts()


def _all_traces(p):
    d = 8
    while True:
        ts = enumerate_traces(p, d)
        if not ts.frontier:
            return ts
        d *= 2


def _accepts(L, trace):
    cur = {L.init}
    for a in trace:
        cur = {d for q in cur for d in L.succ(q, a)}
        if not cur:
            return False
    return True


@settings(max_examples=200)
@given(seeds)
def test_denotational_agrees_with_game(seed):
    rng = random.Random(seed)
    L = random_lts(rng, rng.randint(1, 3))
    h = random_hes(rng, rng.randint(1, 3))
    r = cross_check(L, h)
    assert r.agree, f"{hfl.show_hes(h)}\n{r}"


@settings(max_examples=100)
@given(seeds, st.booleans())
def test_translations_match_operational_oracle(seed, higher_order):
    rng = random.Random(seed)
    p = random_program(rng, higher_order=higher_order)
    ts = _all_traces(p)
    L = random_lts(rng, rng.randint(1, 3), density=0.6)
    may = any("a" in t for t in ts.finite)
    must = all("a" in t for t in ts.maximal)
    path = all(_accepts(L, t) for t in ts.finite)
    assert eval_hflz(L0, translate_may(p, "a")).kind == ("valid" if may else "invalid")
    assert eval_hflz(L0, translate_must(p, "a")).kind == ("valid" if must else "invalid")
    assert eval_hflz(L, translate_path(p)).kind == ("valid" if path else "invalid")


@settings(max_examples=100)
@given(seeds)
def test_dual_involution_and_complement(seed):
    rng = random.Random(seed)
    L = random_lts(rng, rng.randint(1, 3))
    h = random_hes(rng, rng.randint(1, 3))
    d = hfl.dual_hes(h)
    assert hfl.hes_alpha_equiv(hfl.dual_hes(d), h)
    v, w = eval_hflz(L, h), eval_hflz(L, d)
    if v.decided and w.decided:
        assert v.kind != w.kind


@settings(max_examples=50)
@given(seeds)
def test_dual_of_translated_programs(seed):
    p = random_program(random.Random(seed))
    h = translate_must(p, "a")
    v, w = eval_hflz(L0, h), eval_hflz(L0, hfl.dual_hes(h))
    assert v.decided and w.decided and v.kind != w.kind


@settings(max_examples=300)
@given(seeds, st.integers(min_value=1, max_value=8))
def test_zielonka_matches_bruteforce(seed, n):
    g = random_game(random.Random(seed), n)
    w0, w1 = solve(g)
    assert w0 | w1 == set(range(n)) and not w0 & w1
    for v in range(n):
        assert (v in w0) == (brute_force_winner(g, v) == 0)


@settings(max_examples=100)
@given(seeds)
def test_program_printer_roundtrip(seed):
    p = random_program(random.Random(seed), higher_order=True)
    assert parse_program(show_program(p)) == p


@settings(max_examples=100)
@given(seeds)
def test_hes_printer_roundtrip(seed):
    h = random_hes(random.Random(seed), 3, max_arity=2)
    assert hfl.hes_alpha_equiv(hfl.parse_hes(hfl.show_hes(h)), h)
