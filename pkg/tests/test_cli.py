import io
import json
import subprocess
import sys

import pytest

from qlap import harness as hs
from qlap import theorems as th
from qlap.cli import main
from qlap.graph_core import Complete, Cycle, construct_family, write_graph6

C5 = write_graph6(construct_family(Cycle(5)))
K4 = write_graph6(construct_family(Complete(4)))


def run(*argv, stdin=""):
    out = io.StringIO()
    code = main(list(argv), out=out, stdin=io.StringIO(stdin))
    return code, out.getvalue()


# ---------------------------------------------------------------- spectrum

def test_spectrum_examples():
    assert run("spectrum", "--family", "K:5") == (0, "8 3 3 3 3\n")
    assert run("spectrum", "--graph6", "Cl") == (0, "4 2 2 0\n")


def test_spectrum_exact_k133():
    code, text = run("spectrum", "--family", "K1t:3,2", "--exact")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "9 4 4 4 4 4 1"
    assert lines[1] == f"charpoly: {th.k1t_charpoly(3, 2)}"
    assert lines[2] == "factored: (x - 9) (x - 4)^5 (x - 1)"
    assert lines[3] == "integer eigenvalues: 9^1 4^5 1^1"
    assert lines[4] == "a=1 m=0 m2=0"


def test_spectrum_errors(capsys):
    assert run("spectrum", "--graph6", "D")[0] == 2
    assert run("spectrum", "--family", "blob:2")[0] == 2
    assert run("spectrum", "--graph6", "Cl", "--family", "K:3")[0] == 2
    assert run("spectrum")[0] == 2
    assert "error" in capsys.readouterr().err


# ---------------------------------------------------------------- verify

def test_verify_examples(tmp_path):
    code, text = run("verify", "--theorem", "1", "--n", "2..6")
    assert code == 0 and text.endswith("VIOLATIONS: 0\n")
    out = tmp_path / "r.json"
    code, _ = run("verify", "--theorem", "3", "--n", "3..3", "--out", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["paper_exceptions"]
    assert run("verify", "--theorem", "4", "--n", "2..6")[0] == 0


def test_verify_formats(tmp_path):
    out = tmp_path / "r.csv"
    code, text = run("verify", "--theorem", "1,4", "--n", "3..4", "--out", str(out), "--format", "csv")
    assert code == 0
    assert out.read_text().splitlines()[0] == "n,suite,checked,holds,exceptions,violations"
    assert text.endswith("VIOLATIONS: 0\n")
    code, text = run("verify", "--theorem", "das", "--theorem", "k1t", "--n", "2..4", "--format", "json")
    assert set(json.loads(text)["suites"]) == {"das", "k1t"}


def test_verify_usage_errors():
    assert run("verify", "--theorem", "7")[0] == 2
    assert run("verify", "--theorem", "1", "--n", "2-5")[0] == 2
    assert run("verify", "--theorem", "1", "--n", "2..9")[0] == 2
    assert run("verify", "--n", "2..3")[0] == 2


def test_verify_stdin_and_random():
    code, text = run("verify", "--theorem", "1,2,3,4", "--n", "3..4", "--input", "-",
                     stdin="Bw\nCl\nCh\n@\n")
    assert code == 0 and "th1   checked        3" in text
    assert "th3   checked        2" in text  # K_3 is out of scope for th3
    code, text = run("verify", "--theorem", "weyl", "--n", "2..6", "--random", "30", "--seed", "3")
    assert code == 0


def test_exit_code_tracks_violations(monkeypatch, tmp_path):
    def always_wrong(g, pre, i):
        return "violation", {"forced": True}

    for forced in (False, True):
        if forced:
            monkeypatch.setitem(hs._SUITE_FUNCS, "th4", always_wrong)
        out = tmp_path / f"r{forced}.json"
        code, _ = run("verify", "--theorem", "4", "--n", "2..3", "--out", str(out))
        violations = sum(s["violations"] for s in json.loads(out.read_text())["suites"].values())
        assert code == (1 if violations else 0)
        assert bool(violations) == forced


def test_jobs_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("QLAP_JOBS", "2")
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run("verify", "--theorem", "1,3", "--n", "2..5", "--out", str(a))[0] == 0
    assert run("verify", "--theorem", "1,3", "--n", "2..5", "--out", str(b), "--jobs", "1")[0] == 0
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------- certificate

def test_certificate_examples():
    code, text = run("certificate", "--graph6", "Ch")
    assert code == 0
    assert text.splitlines() == ["(1,1,-1,-1)", "Q·y = (n−2)·y exact: OK"]
    code, text = run("certificate", "--graph6", K4)
    assert code == 0 and len(text.splitlines()) == 4
    code, text = run("certificate", "--graph6", C5)
    assert code == 1 and "complement has no qualifying bipartite components" in text


# ---------------------------------------------------------------- weyl

def test_weyl_examples():
    code, text = run("weyl", "--graph6", "Ch", "--i", "2", "--j", "4")
    assert code == 0
    assert "equality" in text and "(1,1,-1,-1)" in text
    code, text = run("weyl", "--graph6", "Bw", "--i", "2", "--j", "3")
    assert code == 0 and "1 <= 1" in text and "equality" in text
    code, text = run("weyl", "--graph6", "Cl", "--i", "1", "--j", "1")
    assert code == 0 and "Wein2" in text and "6 >= 6" in text and "(1,1,1,1)" in text


def test_weyl_errors():
    assert run("weyl", "--graph6", "Ch", "--i", "5", "--j", "1")[0] == 2
    code, text = run("weyl", "--graph6", C5, "--i", "2", "--j", "5")
    assert code == 0 and text.startswith("undecidable")


# ---------------------------------------------------------------- stdin

@pytest.mark.parametrize("argv", [
    ("spectrum",), ("spectrum", "--exact"), ("certificate",),
    ("weyl", "--i", "2", "--j", "4"),
])
def test_stdin_matches_flag(argv):
    for g6 in ("Ch", "Cl", "C~"):
        assert run(*argv, stdin=g6 + "\n") == run(*argv, "--graph6", g6)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qlap", "spectrum", "--graph6", "Cl"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "4 2 2 0\n"
    proc = subprocess.run([sys.executable, "-m", "qlap", "spectrum", "--graph6", "!"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
