"""Acceptance criteria, one test per criterion.

Each test records a line ``criterion N: PASS|FAIL (seconds) detail``; the lines
are printed at the end of the pytest run (see conftest.py) and when this file
is executed directly.
"""

from __future__ import annotations

import random
import sys
import time

import pytest

from hflz import corpus, hfl
from hflz.automata import trivial_lts
from hflz.checker import (
    brute_force_winner, cross_check, denotational_check, eval_hflz, random_game, solve,
)
from hflz.gen import random_hes, random_lts, random_program
from hflz.intertype import infer_intersection_transform, temporal_pipeline
from hflz.opsem import call_sequence_prefixes, enumerate_traces, must_reach_bounded, Reach, traces_upto
from hflz.translate import translate_csa, translate_may, translate_must, translate_path

RESULTS: list = []
L0 = trivial_lts()


def _record(n, limit, fn):
    t0 = time.perf_counter()
    try:
        detail = fn()
        ok, err = True, None
    except AssertionError as e:
        ok, err, detail = False, e, str(e)
    dt = time.perf_counter() - t0
    if ok and limit is not None and dt >= limit:
        ok, detail = False, f"took {dt:.2f}s, limit {limit}s"
        err = AssertionError(detail)
    RESULTS.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({dt:.2f}s) {detail or ''}".rstrip())
    if err is not None:
        raise err


def _kind(lts, h):
    return eval_hflz(lts, h).kind


# ---------------------------------------------------------------------------


def crit1():
    got = [
        denotational_check(corpus.lts_file(), corpus.phi_file()),
        denotational_check(corpus.lts_1(), corpus.phi_ab_c()),
        denotational_check(corpus.lts_1(), corpus.phi_even_c0()),
    ]
    assert got == [{"q0"}, {"q0", "q2"}, {"q2"}], got
    return "file={q0} ab={q0,q2} even={q2}"


def _exhaustive_traces(p):
    d = 8
    while True:
        ts = enumerate_traces(p, d)
        if not ts.frontier:
            return ts
        d *= 2


def crit2():
    h = translate_may(corpus.p_loop(), "a")
    assert _kind(L0, h) == "invalid"
    assert _kind(L0, hfl.dual_hes(h)) == "valid"
    for n in (0, 1, 3):
        p = corpus.p_sum(n)
        ts = _exhaustive_traces(p)
        oracle = any("fail" in tr for tr in ts.finite)
        assert not oracle, f"P_sum {n}: oracle finds a failure"
        assert _kind(L0, translate_may(p, "fail")) == "invalid", f"P_sum {n}"
    return "P_loop invalid, dual valid, P_sum 0/1/3 invalid"


def crit3():
    for m, n in ((1, 1), (2, 2), (3, 1)):
        p = corpus.p_loopxy(m, n)
        assert _kind(L0, translate_must(p, "end")) == "valid", (m, n)
        assert must_reach_bounded(p, "end", 200) == Reach.YES, (m, n)
    return "(1,1) (2,2) (3,1) valid, oracle yes"


def crit4():
    L = corpus.lts_file_end()
    got = {n: _kind(L, corpus.hes_file_end(n)) for n in (0, 1, 5, -1, -3)}
    assert got == {0: "valid", 1: "valid", 5: "valid", -1: "invalid", -3: "invalid"}, got
    return "n=0,1,5 valid; n=-1,-3 invalid"


def crit5():
    p = corpus.p_app()
    h = translate_csa(p, corpus.OMEGA_APP)
    expected = hfl.parse_hes(corpus.HES_APP)
    assert hfl.hes_alpha_equiv(h, expected), hfl.show_hes(h)
    assert [e.name for e in h.equations] == ["APP", "f_b", "f_a"]
    assert _kind(L0, h) == "valid"
    syms = {c.symbols[1:] for c in call_sequence_prefixes(p, 60) if len(c.symbols) <= 9}
    w = (("f_b",) + ("f_a",) * 5) * 2
    want = {w[:i] for i in range(9)} | {w[:i] + ("APP",) for i in range(1, 8)}
    assert syms == want, syms ^ want
    return "alpha-equivalent, valid, Callseq prefixes to length 8"


def crit6():
    p = corpus.p_tr()
    A = corpus.automaton_ab()
    xi, p2, omega = infer_intersection_transform(p, A)
    prios = sorted(omega[d.name] for d in p2.defs if d.name in omega)
    assert len(omega) == 4 and prios == [1, 1, 1, 2], omega
    src, dst = traces_upto(p, 12), traces_upto(p2, 12)
    assert src == dst, f"{len(src)} vs {len(dst)} traces"
    return f"4 instances, priorities {prios}, {len(src)} traces agree"


def crit7():
    A = corpus.automaton_ab()
    got = (_kind(L0, temporal_pipeline(corpus.p0(True), A)),
           _kind(L0, temporal_pipeline(corpus.p0(False), A)))
    assert got == ("invalid", "valid"), got
    return "c=true invalid, c=false valid"


def _lts_accepts(L, tr):
    cur = {L.init}
    for a in tr:
        cur = {d for q in cur for d in L.succ(q, a)}
        if not cur:
            return False
    return True


def crit8():
    # (a) denotational vs game on pure HFL
    rng = random.Random(2024)
    bad_a = 0
    for _ in range(200):
        L = random_lts(rng, rng.randint(1, 3))
        h = random_hes(rng, rng.randint(1, 3))
        bad_a += not cross_check(L, h).agree
    # (b) translations vs the operational oracle
    bad_b = 0
    for i in range(100):
        p = random_program(rng, higher_order=(i % 2 == 0))
        ts = _exhaustive_traces(p)
        L = random_lts(rng, rng.randint(1, 3), density=0.6)
        cases = [
            (L0, translate_may(p, "a"), any("a" in tr for tr in ts.finite)),
            (L0, translate_must(p, "a"), all("a" in tr for tr in ts.maximal)),
            (L, translate_path(p), all(_lts_accepts(L, tr) for tr in ts.finite)),
        ]
        for lts, h, exp in cases:
            bad_b += _kind(lts, h) != ("valid" if exp else "invalid")
    # (c) dual involution and complementarity
    bad_c = 0
    for _ in range(100):
        L = random_lts(rng, rng.randint(1, 3))
        h = random_hes(rng, rng.randint(1, 3))
        d = hfl.dual_hes(h)
        bad_c += not hfl.hes_alpha_equiv(hfl.dual_hes(d), h)
        v, w = eval_hflz(L, h), eval_hflz(L, d)
        if v.decided and w.decided:
            bad_c += v.kind == w.kind
    # (d) Zielonka vs brute force
    bad_d = 0
    for _ in range(300):
        g = random_game(rng, rng.randint(1, 8))
        w0, _ = solve(g)
        bad_d += sum((v in w0) != (brute_force_winner(g, v) == 0) for v in range(len(g)))
    bad = (bad_a, bad_b, bad_c, bad_d)
    assert bad == (0, 0, 0, 0), f"mismatches (a,b,c,d) = {bad}"
    return "0 mismatches in (a) (b) (c) (d)"


CRITERIA = [(1, 1.0, crit1), (2, 5.0, crit2), (3, 10.0, crit3), (4, 5.0, crit4),
            (5, 5.0, crit5), (6, None, crit6), (7, 10.0, crit7), (8, None, crit8)]


@pytest.mark.parametrize("n,limit,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(n, limit, fn):
    _record(n, limit, fn)


if __name__ == "__main__":
    failed = 0
    for n, limit, fn in CRITERIA:
        try:
            _record(n, limit, fn)
        except AssertionError:
            failed += 1
        print(RESULTS[-1])
    sys.exit(1 if failed else 0)
