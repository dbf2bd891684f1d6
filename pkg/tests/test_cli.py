import subprocess
import sys

from conftest import THEORIES, TRACES
from divcritic.cli import main
from divcritic.syntax import load_theory, parse_theory, parse_trace

DBL = str(THEORIES / "dbl.th")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_speculate_from_trace(capsys):
    code, out, _ = run(capsys, "speculate", DBL, "--trace", str(TRACES / "dbl_session.trace"))
    assert code == 0
    tail = out.split("Merging remaining lemmas:\n")[1].strip().splitlines()
    assert tail == ["plus(s(X1), V1) = s(plus(X1, V1))", "plus(s(X1), V1) = plus(X1, s(V1))"]


def test_reports_are_byte_identical(capsys):
    args = ("speculate", DBL, "--trace", str(TRACES / "dbl_session.trace"))
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_no_pattern_exits_one(capsys, tmp_path):
    tr = tmp_path / "flat.trace"
    tr.write_text("eq a parent=- dbl(X) = plus(X, X)\neq b parent=a plus(X, 0) = X\n")
    code, out, _ = run(capsys, "speculate", DBL, "--trace", str(tr))
    assert code == 1 and "no divergence pattern" in out


def test_input_errors_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.th"
    bad.write_text("sort nat\nrule f(X) = X\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "line 2" in err
    assert run(capsys, "check", str(tmp_path / "missing.th"))[0] == 2
    assert run(capsys, "speculate", DBL, "--window", "1")[0] == 2


def test_no_conjecture_exits_two(capsys, tmp_path):
    th = tmp_path / "plain.th"
    th.write_text("sort nat\ncons 0 : -> nat\n")
    assert run(capsys, "prove", str(th))[0] == 2


def test_prove_dbl(capsys, tmp_path):
    dump = tmp_path / "out.trace"
    code, out, _ = run(capsys, "prove", DBL, "--emit-trace", str(dump))
    assert code == 0 and out.rstrip().endswith("Result: proved")
    sig = load_theory(DBL).theory.signature
    _, trace = parse_trace(dump.read_text(), sig)
    assert len(trace) >= 3


def test_quiet_prints_nothing(capsys):
    code, out, _ = run(capsys, "prove", DBL, "--quiet")
    assert code == 0 and out == ""


def test_diffmatch_command(capsys):
    code, out, _ = run(capsys, "diffmatch", DBL, "s(s(plus(X, X)))", "s(plus(X, X))")
    assert code == 0 and out == "{s(<s(plus(X, X))>)}\n"
    code, out, _ = run(capsys, "diffmatch", DBL, "plus(X, Y)", "plus(A, A)")
    assert code == 1 and "no difference match" in out
    code, out, _ = run(capsys, "diffmatch", DBL, "s(s(X))", "s(X)", "--all")
    assert code == 0 and len(out.splitlines()) == 2


def test_check_round_trips(capsys):
    code, out, _ = run(capsys, "check", DBL)
    assert code == 0
    assert parse_theory(out).theory == load_theory(DBL).theory


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "divcritic", "speculate", DBL, "--trace", str(TRACES / "dbl_session.trace")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and "Lemmas speculated:" in res.stdout
