import pytest

from hflz import corpus
from hflz.opsem import (
    Reach, StuckError, call_sequence_prefixes, enumerate_traces, eval_int, initial_term,
    may_reach_bounded, must_reach_bounded, reduce_with_choice, step, traces_upto,
)
from hflz.surface import NonDet, Unit, parse_program, parse_term


def test_eval_int():
    assert eval_int(parse_term("3 * (2 - 5)")) == -9
    assert eval_int(parse_term("0 - 4 + 1")) == -3


def test_traces_of_loopxy():
    ts = enumerate_traces(corpus.p_loopxy(1, 1), 60)
    assert ts.maximal == {("end",)}
    assert not ts.frontier


def test_p_sum_never_fails():
    for n in range(4):
        ts = enumerate_traces(corpus.p_sum(n), 200)
        assert not ts.frontier
        assert ts.maximal == {()}


def test_loop_is_silent_forever():
    p = corpus.p_loop()
    assert may_reach_bounded(p, "a", 30) == Reach.UNKNOWN
    assert must_reach_bounded(p, "a", 30) == Reach.UNKNOWN
    ts = enumerate_traces(p, 30)
    assert ts.finite == {()} and ts.frontier


def test_must_and_may():
    p = parse_program("main = (event a; ()) <> (event b; ())")
    assert may_reach_bounded(p, "a", 10) == Reach.YES
    assert must_reach_bounded(p, "a", 10) == Reach.NO
    assert may_reach_bounded(p, "c", 10) == Reach.NO


def test_reduce_with_choice():
    p = corpus.p_tr()
    r = reduce_with_choice(p, initial_term(p), "LLRR")
    assert r.trace == ("a", "a", "b", "b")
    assert r.exhausted and isinstance(r.term, NonDet)
    q = parse_program("main = (event a; ()) <> ()")
    r = reduce_with_choice(q, initial_term(q), "R")
    assert r.trace == () and isinstance(r.term, Unit)


def test_step_on_unit_is_empty():
    p = parse_program("main = ()")
    assert step(p, parse_term("()")) == []


def test_call_sequences_of_p_app():
    syms = {c.symbols for c in call_sequence_prefixes(corpus.p_app(), 30)}
    assert ("main", "f_b", "f_a", "f_a") in syms
    assert ("main", "f_b", "APP") in syms
    assert ("main", "APP") not in syms


def test_traces_upto_is_prefix_closed():
    ts = traces_upto(corpus.p_tr(), 6)
    assert all(t[:-1] in ts for t in ts if t)
    assert max(len(t) for t in ts) == 6


def test_traces_upto_budget():
    p = parse_program("f x = (event a; f (x + 1)) <> (event b; f (x + 2)); main = f 0")
    with pytest.raises(StuckError):
        traces_upto(p, 40, max_states=1000)
