import pytest

from hflz import corpus, hfl
from hflz.automata import trivial_lts
from hflz.checker import eval_hflz
from hflz.surface import parse_program
from hflz.translate import (
    TranslationError, csa_order, normalize_priorities, parse_priorities, show_priorities,
    translate_csa, translate_may, translate_must, translate_path,
)

L0 = trivial_lts()


def _has_modal(h):
    fs = [e.body for e in h.equations] + [h.main]
    return any(isinstance(g, (hfl.Diamond, hfl.Box)) for f in fs for g in hfl.subformulas(f))


def test_may_loop_shape():
    h = translate_may(corpus.p_loop(), "a")
    assert [e.fix for e in h.equations] == ["mu"]
    assert not _has_modal(h)
    assert eval_hflz(L0, h).kind == "invalid"


def test_may_erases_unwatched_events():
    p = parse_program("main = (event b; ()) <> (event a; ())")
    assert eval_hflz(L0, translate_may(p, "a")).kind == "valid"
    assert eval_hflz(L0, translate_must(p, "a")).kind == "invalid"
    assert eval_hflz(L0, translate_must(p, "b")).kind == "invalid"
    q = parse_program("main = (event b; event a; ()) <> (event a; ())")
    assert eval_hflz(L0, translate_must(q, "a")).kind == "valid"


def test_path_uses_modalities():
    p = parse_program("f x = if x > 0 then (event read; f (x - 1)) else (event close; ()); main = f 2")
    h = translate_path(p)
    assert [e.fix for e in h.equations] == ["nu"]
    assert eval_hflz(corpus.lts_file(), h).kind == "valid"
    bad = parse_program("main = event close; event read; ()")
    assert eval_hflz(corpus.lts_file(), translate_path(bad)).kind == "invalid"


def test_csa_matches_expected_system():
    h = translate_csa(corpus.p_app(), corpus.OMEGA_APP)
    assert hfl.hes_alpha_equiv(h, hfl.parse_hes(corpus.HES_APP))
    assert not _has_modal(h)


def test_csa_order_and_fix_parity():
    omega = {"APP": 3, "f_a": 1, "f_b": 2}
    h = translate_csa(corpus.p_app(), omega)
    prios = [omega[e.name] for e in h.equations]
    assert prios == sorted(prios, reverse=True)
    assert all((e.fix == "nu") == (omega[e.name] % 2 == 0) for e in h.equations)


def test_csa_verdicts_follow_priorities():
    p = corpus.p_app()
    assert eval_hflz(L0, translate_csa(p, {"APP": 3, "f_a": 2, "f_b": 1})).kind == "valid"
    assert eval_hflz(L0, translate_csa(p, {"APP": 0, "f_a": 1, "f_b": 1})).kind == "invalid"


def test_csa_missing_priority():
    with pytest.raises(TranslationError):
        translate_csa(corpus.p_app(), {"APP": 1, "f_a": 1})


def test_csa_order_is_stable():
    assert csa_order({"x": 1, "y": 2, "z": 1}, ["x", "y", "z"]) == ["y", "x", "z"]


def test_normalize_priorities():
    omega = {"a": 3, "b": 2, "c": 2}
    assert normalize_priorities(omega, ["a", "b", "c"]) == {"a": 5, "b": 2, "c": 0}
    with pytest.raises(TranslationError):
        normalize_priorities(omega, ["b", "a", "c"])


def test_priority_files():
    text = "APP 3\n# comment\nf_a 1\n\nf_b 2\n"
    omega = parse_priorities(text)
    assert omega == corpus.OMEGA_APP
    assert parse_priorities(show_priorities(omega)) == omega
    with pytest.raises(TranslationError):
        parse_priorities("f -1\n")
    with pytest.raises(TranslationError):
        parse_priorities("f 1 2\n")
