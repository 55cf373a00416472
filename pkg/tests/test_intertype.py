import pytest

from hflz import corpus
from hflz.automata import trivial_lts
from hflz.checker import eval_hflz
from hflz.intertype import (
    ArrowT, Conj, IntArg, StateT, TransformError, check_total, enc, infer_intersection_transform,
    make_conj, mangle, temporal_pipeline,
)
from hflz.opsem import traces_upto
from hflz.surface import instrument_total, parse_program, typecheck_program

A = corpus.automaton_ab()
QA, QB = StateT("qa"), StateT("qb")


def _verdict(text):
    return eval_hflz(trivial_lts(), temporal_pipeline(parse_program(text), A)).kind


def test_ex_tr_instances():
    xi, p2, omega = infer_intersection_transform(corpus.p_tr(), A)
    k = make_conj([(QA, 0), (QB, 1)])
    want = {
        ("f", ArrowT(IntArg(), QA), 0),
        ("f", ArrowT(IntArg(), QB), 1),
        ("g", ArrowT(k, QA), 0),
        ("g", ArrowT(k, QB), 0),
    }
    assert {(f, t, m) for f, t, m in xi} == want
    assert sorted(omega.values()) == [1, 1, 1, 2]
    typecheck_program(p2)


def test_ex_tr_traces_preserved():
    xi, p2, _ = infer_intersection_transform(corpus.p_tr(), A)
    assert traces_upto(corpus.p_tr(), 8) == traces_upto(p2, 8)


def test_unpruned_is_larger():
    xi, _, _ = infer_intersection_transform(corpus.p_tr(), A)
    full, _, _ = infer_intersection_transform(corpus.p_tr(), A, prune=False)
    assert len(full) >= len(xi)


def test_mangling_is_injective():
    ts = [QA, QB, ArrowT(IntArg(), QA), ArrowT(make_conj([(QA, 0)]), QA),
          ArrowT(make_conj([(QA, 0), (QB, 1)]), QA), ArrowT(make_conj([(QA, 1)]), QA),
          ArrowT(Conj(()), QB), ArrowT(IntArg(), ArrowT(make_conj([(QB, 0)]), QA))]
    names = {mangle("f", t, m) for t in ts for m in (0, 1)}
    assert len(names) == 2 * len(ts)
    assert len({enc(t) for t in ts}) == len(ts)


def test_check_total():
    with pytest.raises(TransformError):
        check_total(parse_program("main = event a; ()"))
    check_total(instrument_total(parse_program("main = event a; ()")))


@pytest.mark.parametrize("text,kind", [
    ("f = event a; f; main = f", "invalid"),     # a^omega is accepted
    ("f = event b; f; main = f", "valid"),       # infinitely many b
    ("f = (event a; f) <> (event b; f); main = f", "invalid"),
    ("f x = if x > 0 then (event a; f (x - 1)) else (event b; f 3); main = f 3", "valid"),
    (corpus.p0_text(True), "invalid"),
    (corpus.p0_text(False), "valid"),
])
def test_temporal_verdicts(text, kind):
    assert _verdict(text) == kind


def test_p_tr_is_valid():
    # every infinite trace of P_tr has infinitely many b's
    assert eval_hflz(trivial_lts(), temporal_pipeline(corpus.p_tr(), A)).kind == "valid"
