import subprocess
import sys
from pathlib import Path

import pytest

from hflz import corpus, hfl
from hflz.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def shell(*argv, stdin=None):
    return subprocess.run([sys.executable, "-m", "hflz", *map(str, argv)], input=stdin,
                          capture_output=True, text=True, cwd=DATA)


def test_verify_may_loop(capsys):
    code, out, _ = run(capsys, "verify", "--mode", "may", "--event", "a", DATA / "p_loop.prog")
    assert code == 1 and out.splitlines()[-1] == "RESULT invalid"


def test_csa_then_check(capsys, tmp_path):
    out_file = tmp_path / "out.hes"
    code, _, _ = run(capsys, "translate", "--mode", "csa", "--prio", DATA / "p_app.prio",
                     DATA / "p_app.prog", "--out", out_file)
    assert code == 0
    assert hfl.hes_alpha_equiv(hfl.parse_hes(out_file.read_text()), hfl.parse_hes(corpus.HES_APP))
    code, out, _ = run(capsys, "check", DATA / "l0.lts", out_file)
    assert code == 0 and out == "RESULT valid\n"


def test_path_pipeline():
    tr = shell("translate", "--mode", "path", "aut.dfa", "p2.prog")
    assert tr.returncode == 0
    ck = shell("check", "lfile.lts", "-", stdin=tr.stdout)
    assert ck.returncode == 0 and ck.stdout == "RESULT valid\n"
    bad = shell("translate", "--mode", "path", "aut.dfa", "p_bad.prog")
    assert shell("check", "lfile.lts", "-", stdin=bad.stdout).returncode == 1


def test_piped_and_file_output_identical(tmp_path):
    a = shell("translate", "--mode", "path", "--aut", "aut.dfa", "p2.prog").stdout
    shell("translate", "--mode", "path", "aut.dfa", "p2.prog", "--out", tmp_path / "x.hes")
    assert (tmp_path / "x.hes").read_bytes() == a.encode()
    prog = (DATA / "p2.prog").read_text()
    b = shell("translate", "--mode", "path", "aut.dfa", "-", stdin=prog).stdout
    assert a == b


@pytest.mark.parametrize("args,code", [
    (["verify", "--mode", "must", "--event", "end", "p_loopxy.prog"], 0),
    (["verify", "--mode", "may", "--event", "fail", "p_sum3.prog"], 1),
    (["verify", "--mode", "temporal", "--aut", "ab.npw", "p0_true.prog"], 1),
    (["verify", "--mode", "temporal", "--aut", "ab.npw", "p0_false.prog"], 0),
    (["verify", "--mode", "csa", "--prio", "p_app.prio", "p_app.prog"], 0),
    (["verify", "--mode", "path", "--aut", "aut.dfa", "p2.prog"], 0),
    (["check", "lfile_end.lts", "file_end_5.hes"], 0),
    (["check", "lfile_end.lts", "file_end_m1.hes"], 1),
    (["check", "--backend", "game", "lfile_end.lts", "file_end_5.hes"], 0),
])
def test_verdict_exit_codes(monkeypatch, capsys, args, code):
    monkeypatch.chdir(DATA)
    got, out, _ = run(capsys, *args)
    assert got == code
    assert out.splitlines()[-1] == "RESULT " + {0: "valid", 1: "invalid"}[code]


def test_verify_equals_translate_then_check(monkeypatch, capsys, tmp_path):
    monkeypatch.chdir(DATA)
    for prog, event in (("p_loop.prog", "a"), ("p_sum3.prog", "fail"), ("p_loopxy.prog", "end")):
        for mode in ("may", "must"):
            v, _, _ = run(capsys, "verify", "--mode", mode, "--event", event, prog)
            run(capsys, "translate", "--mode", mode, "--event", event, prog, "--out", tmp_path / "h.hes")
            c, _, _ = run(capsys, "check", "l0.lts", tmp_path / "h.hes")
            assert v == c, (prog, mode)


def test_unknown_exit_code(capsys, tmp_path):
    h = tmp_path / "h.hes"
    # n runs off to -inf; intervals cannot tell whether n = 0 is ever hit
    h.write_text("F (n:int) =mu (n = 0) \\/ F (n - 2);\nmain: F 7;\n")
    code, out, _ = run(capsys, "check", "--budget", "3000", DATA / "l0.lts", h)
    assert code == 2 and out == "RESULT unknown\n"


@pytest.mark.parametrize("args", [
    [],
    ["bogus"],
    ["parse", "no/such/file"],
    ["verify", "--mode", "may", "p_loop.prog"],
    ["verify", "--mode", "csa", "p_app.prog"],
    ["verify", "--mode", "path", "p2.prog"],
    ["check", "l0.lts", "p_loop.prog"],
])
def test_usage_errors(monkeypatch, capsys, args):
    monkeypatch.chdir(DATA)
    code, _, err = run(capsys, *args)
    assert code == 3
    assert err


def test_parse_error_exit(capsys, tmp_path):
    f = tmp_path / "bad.prog"
    f.write_text("main = (")
    code, _, err = run(capsys, "parse", f)
    assert code == 3 and "error" in err


def test_type_error_exit(capsys, tmp_path):
    f = tmp_path / "bad.prog"
    f.write_text("f x = x + 1; main = f 1")
    assert run(capsys, "typecheck", f)[0] == 3


def test_parse_typecheck_dual(monkeypatch, capsys):
    monkeypatch.chdir(DATA)
    code, out, _ = run(capsys, "parse", "p_app.prog")
    assert code == 0 and "f_b x =" in out
    code, out, _ = run(capsys, "typecheck", "p_app.prog")
    assert "f_a : int -> unit" in out
    code, out, _ = run(capsys, "dual", "file_end_5.hes")
    d = hfl.parse_hes(out)
    assert hfl.hes_alpha_equiv(hfl.dual_hes(d), corpus.hes_file_end(5))
    code, out, _ = run(capsys, "parse", "--hes", "file_end_5.hes")
    assert hfl.parse_hes(out) == corpus.hes_file_end(5)


def test_run_and_traces(monkeypatch, capsys):
    monkeypatch.chdir(DATA)
    code, out, _ = run(capsys, "run", "--choices", "LR", "p_tr.prog")
    assert code == 0 and out.startswith("trace a b\n") and "choices exhausted" in out
    code, out, _ = run(capsys, "traces", "--depth", "40", "p_loopxy.prog")
    assert "end (maximal)" in out.splitlines()


def test_dump_game(monkeypatch, capsys, tmp_path):
    monkeypatch.chdir(DATA)
    g = tmp_path / "g.txt"
    code, _, _ = run(capsys, "check", "--dump-game", g, "lfile_end.lts", "file_end_5.hes")
    assert code == 0 and g.read_text().startswith("init ")
