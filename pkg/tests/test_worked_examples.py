"""Small worked examples for each stage, checked against hand-derived results."""

import pytest

from hflz import corpus, hfl
from hflz.automata import det_automaton_to_lts, parse_dfa, trivial_lts
from hflz.checker import eval_hflz
from hflz.intertype import infer_intersection_transform
from hflz.opsem import (
    Reach, call_sequence_prefixes, enumerate_traces, initial_term, must_reach_bounded,
    reduce_with_choice, step,
)
from hflz.surface import (
    T_UNIT, ArrowType, Event, If, ProgramError, Unit, instrument_total, normalize_program,
    parse_program, parse_term, show_program, typecheck_program,
)
from hflz.translate import (
    normalize_priorities, translate_csa, translate_may, translate_must, translate_path,
)

L0 = trivial_lts()
P_FILE = "f x = (event close; ()) <> (event read; event read; f x); main = f ()"


def _equiv(h, text):
    return hfl.hes_alpha_equiv(h, hfl.parse_hes(text))


# -- programs ------------------------------------------------------------------

def test_let_in_program():
    p = parse_program("let f x = f x in f 0")
    assert [d.name for d in p.defs] == ["f"]
    assert [d.name for d in normalize_program(p).defs] == ["f", "main"]


def test_assert_shape():
    p = parse_program("main = assert(1 >= 0)")
    body = p.lookup("main").body
    assert isinstance(body, If) and isinstance(body.then_, Unit)
    assert isinstance(body.else_, Event) and body.else_.label == "fail"


def test_simple_types():
    assert typecheck_program(corpus.p_loop())["loop"] == ArrowType(T_UNIT, T_UNIT)
    with pytest.raises(ProgramError):
        typecheck_program(parse_program("f = 1 + (); main = f"))


def test_normalize_is_idempotent():
    p = normalize_program(parse_program(P_FILE))
    assert normalize_program(p) == p


def test_instrument_total():
    p = instrument_total(parse_program("main = ()"))
    assert show_program(p) == "main = event dummy; Loop ();\nLoop x = event dummy; Loop x\n"
    q = instrument_total(corpus.p0(True))
    assert [d.name for d in q.defs] == ["f", "main"]
    assert all(isinstance(d.body, Event) and d.body.label == "dummy" for d in q.defs)


# -- operational semantics ----------------------------------------------------

def test_single_steps():
    p = parse_program("main = ()")
    assert step(p, parse_term("event a; ()")) == [("a", Unit())]
    assert len(step(p, parse_term("(event a; ()) <> ()"))) == 2
    assert step(p, parse_term("if 0 = 0 then (event a; ()) else ()")) == [("", parse_term("event a; ()"))]


def test_file_traces():
    ts = enumerate_traces(parse_program(P_FILE), 8)
    assert {(), ("read",), ("read", "read"), ("close",), ("read", "read", "close")} <= ts.finite
    assert enumerate_traces(parse_program("main = ()"), 3).maximal == {()}


def test_choice_examples():
    p = parse_program("main = (event a; ()) <> (event b; ())")
    r = reduce_with_choice(p, initial_term(p), "L")
    assert (r.trace, r.term, r.remaining) == (("a",), Unit(), ())
    assert reduce_with_choice(p, initial_term(p), "").exhausted
    q = corpus.p0(True)
    assert reduce_with_choice(q, initial_term(q), "", max_steps=6).trace[:1] == ("a",)


def test_call_sequences():
    assert {c.symbols for c in call_sequence_prefixes(parse_program("main = ()"), 5)} == {("main",)}
    dup = parse_program("f_b = if 0 = 0 then (event a; f_a) else (event b; f_b);\n"
                        "f_a = if 0 = 0 then (event a; f_a) else (event b; f_b);\nmain = f_b")
    syms = {c.symbols for c in call_sequence_prefixes(dup, 20)}
    assert ("main", "f_b", "f_a", "f_a", "f_a") in syms
    assert all(s[2:].count("f_b") == 0 for s in syms)


def test_bounded_must():
    assert must_reach_bounded(corpus.p_loopxy(1, 1), "end", 50) == Reach.YES
    assert must_reach_bounded(parse_program("main = ()"), "end", 5) == Reach.NO


# -- formulas -----------------------------------------------------------------

def test_hes_to_formula():
    h = hfl.parse_hes("X =nu Y; Y =mu <b>X \\/ <a>Y; main: X;")
    assert hfl.alpha_equiv(hfl.hes_to_formula(h), hfl.parse_formula("nu X. mu Y. <b>X \\/ <a>Y"))
    back = hfl.formula_to_hes(hfl.parse_formula("nu X. mu Y. <b>X \\/ <a>Y"))
    assert hfl.hes_alpha_equiv(back, h)
    assert hfl.formula_to_hes(hfl.parse_formula("<a>true")).equations == ()


def test_ill_typed_formula():
    with pytest.raises(hfl.HflError):
        hfl.parse_formula("(<a>true) + 1")


def test_dual_examples():
    d = hfl.dual_hes(hfl.parse_hes("X =mu <a>X; main: X;"))
    assert _equiv(d, "X =nu [a]X; main: X;")
    h = translate_may(corpus.p_loop(), "a")
    assert eval_hflz(L0, hfl.dual_hes(h)).kind == "valid"


@pytest.mark.parametrize("kind,body,want", [
    ("exists", "x = 5", "valid"), ("forall", "0 = 0", "valid"), ("forall", "x >= 0", "invalid"),
])
def test_quantifiers(kind, body, want):
    lam = hfl.Lam("x", hfl.INT, hfl.parse_formula(body, env={"x": hfl.INT}))
    assert eval_hflz(L0, hfl.encode_quantifier(kind, "X", lam)).kind == want


# -- automata -----------------------------------------------------------------

def test_dfa_to_lts():
    A = parse_dfa("state q0 init\nstate q1\nstate q2\ntrans q0 read q0\ntrans q0 close q1\ntrans q1 end q2\n")
    assert det_automaton_to_lts(A) == corpus.lts_file_end()
    assert det_automaton_to_lts(parse_dfa("state q0\n")) == trivial_lts()


# -- translations -------------------------------------------------------------

def test_may_examples():
    assert _equiv(translate_may(corpus.p_loop(), "a"), "loop x =mu loop x; main: loop true;")
    assert _equiv(translate_may(parse_program("main = ()"), "a"), "main: false;")
    h = translate_may(corpus.p_sum(2), "fail")
    assert _equiv(h, "Sum (x:int) k =mu (x = 0 /\\ k 0) \\/ (x != 0 /\\ Sum (x - 1) (\\r:int. k (x + r)));\n"
                     "Omega =mu Omega;\n"
                     "main: Sum 2 (\\r:int. (r >= 2 /\\ false) \\/ (r < 2 /\\ true));")


def test_must_examples():
    assert _equiv(translate_must(parse_program("main = event end; ()"), "end"), "main: true;")
    h = translate_must(parse_program("main = () <> (event end; ())"), "end")
    assert eval_hflz(L0, h).kind == "invalid"
    assert must_reach_bounded(parse_program("main = () <> (event end; ())"), "end", 10) == Reach.NO
    h = translate_must(corpus.p_loopxy(1, 1), "end")
    assert _equiv(h, "loop (x:int) (y:int) =mu ((x > 0 /\\ y > 0) \\/ true) /\\ "
                     "((x <= 0 \\/ y <= 0) \\/ (loop (x - 1) (y * y) /\\ loop x (y - 1)));\n"
                     "main: loop 1 1;")


def test_path_examples():
    assert _equiv(translate_path(parse_program("main = ()")), "main: true;")
    p = parse_program("readex x h k = event read; (k () <> h ());\n"
                      "f x h k = readex x h (fun r -> f x h k);\n"
                      "main = f () (fun r -> event close; ()) (fun r -> ())")
    h = translate_path(p)
    readex = h.equations[0]
    assert readex.fix == "nu"
    assert hfl.alpha_equiv(readex.rhs(), hfl.parse_formula(
        "\\x:prop. \\h:prop -> prop. \\k:prop -> prop. <read>(k true /\\ h true)"))
    assert eval_hflz(corpus.lts_file(), h).kind == "valid"


def test_priority_normalization():
    assert normalize_priorities(corpus.OMEGA_APP, ["APP", "f_b", "f_a"]) == {"APP": 5, "f_b": 2, "f_a": 1}
    omega = normalize_priorities({"f": 4, "g": 2}, ["f", "g"])
    assert all(m % 2 == 0 for m in omega.values())
    assert normalize_priorities({"f": 0}, ["f"]) == {"f": 0}


def test_csa_of_dup():
    dup = parse_program("f_b = if 0 = 0 then (event a; f_a) else (event b; f_b);\n"
                        "f_a = if 0 = 0 then (event a; f_a) else (event b; f_b);\nmain = f_b")
    h = translate_csa(dup, {"f_b": 2, "f_a": 1})
    assert _equiv(h, "f_b =nu (0 != 0 \\/ f_a) /\\ (0 = 0 \\/ f_b);\n"
                     "f_a =mu (0 != 0 \\/ f_a) /\\ (0 = 0 \\/ f_b);\nmain: f_b;")
    assert eval_hflz(L0, h).kind == "invalid"


def test_trivial_transform():
    from hflz.automata import make_parity
    A = make_parity(["q"], {"q": 0}, [("q", "dummy", "q")], "q")
    xi, p2, omega = infer_intersection_transform(instrument_total(parse_program("main = ()")), A)
    assert len(p2.defs) >= 1 and all(m % 2 == 1 for m in omega.values())
