import subprocess
import sys

import pytest

from cctab.cli import main
from cctab.fixtures import gen_fixture

from conftest import FIXTURES, read_golden

MIXED = str(FIXTURES / "mixed_loop.pl")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_general_query(capsys):
    code, out, _ = run_cli(capsys, MIXED, "--query", "t(A)")
    assert code == 0
    assert out.splitlines() == ["t(0)", "t(1)"]


def test_legacy_query_loses_answer(capsys):
    code, out, _ = run_cli(capsys, MIXED, "--query", "t(A)", "--mode", "legacy")
    assert code == 0
    assert out.splitlines() == ["t(0)"]


def test_oracle_check_ok(capsys):
    code, out, _ = run_cli(capsys, MIXED, "--query", "t(A)", "--oracle-check")
    assert code == 0
    assert out.splitlines()[-1] == "OK"


def test_oracle_check_mismatch_exits_1(capsys):
    code, out, _ = run_cli(capsys, MIXED, "--query", "t(A)", "--mode", "legacy", "--oracle-check")
    assert code == 1
    assert "missing: t(1)" in out.splitlines()


def test_show_bridges(capsys):
    code, out, _ = run_cli(capsys, MIXED, "--show-bridges")
    assert code == 0
    assert out.splitlines() == ["p/1"]


def test_translate_only_matches_golden(capsys):
    code, out, _ = run_cli(capsys, MIXED, "--translate-only")
    assert code == 0
    assert out == read_golden("mixed_loop.general.pl")
    code, out, _ = run_cli(capsys, MIXED, "--translate-only", "--mode", "legacy")
    assert code == 0
    assert out == read_golden("mixed_loop.legacy.pl")


def test_gen_chain_query(capsys):
    code, out, _ = run_cli(capsys, "--gen", "chain:4", "--query", "path(1, X)")
    assert code == 0
    assert out.splitlines() == ["path(1, 2)", "path(1, 3)", "path(1, 4)", "path(1, 5)"]


def test_gen_fixture_shapes():
    chain = gen_fixture("chain", 2)
    assert "edge(1, 2)." in chain and "edge(2, 3)." in chain
    cycle = gen_fixture("cycle", 2)
    assert "edge(3, 1)." in cycle
    grid = gen_fixture("grid", 2)
    assert "edge(1, 2)." in grid and "edge(1, 3)." in grid and "edge(2, 4)." in grid
    with pytest.raises(ValueError):
        gen_fixture("circle", 3)


def test_stats_line(capsys):
    code, out, _ = run_cli(capsys, MIXED, "--query", "t(A)", "--stats")
    assert code == 0
    last = out.splitlines()[-1]
    assert last.startswith("suspensions=1 resumptions=2 ")
    assert " generators=1 answers=2" in last


def test_depth_flag_limits_runaway(capsys, tmp_path):
    f = tmp_path / "loop.pl"
    f.write_text("loop(X) :- loop(X).\n")
    code, _, err = run_cli(capsys, str(f), "--query", "loop(1)", "--depth", "1000")
    assert code == 2
    assert "budget" in err


def test_parse_error_exits_2(capsys, tmp_path):
    f = tmp_path / "bad.pl"
    f.write_text("t(0)\n")
    code, _, err = run_cli(capsys, str(f), "--query", "t(X)")
    assert code == 2
    assert "error" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run_cli(capsys, "/nonexistent/prog.pl", "--query", "x")
    assert code == 2


def test_flag_conflicts(capsys, tmp_path):
    code, _, err = run_cli(capsys, MIXED, "--gen", "chain:2")
    assert code == 2
    code, _, err = run_cli(capsys, MIXED, "--translate-only", "--query", "t(A)")
    assert code == 2
    code, _, err = run_cli(capsys)
    assert code == 2
    code, _, err = run_cli(capsys, MIXED, "--oracle-check")
    assert code == 2


def test_answer_order_deterministic(capsys):
    runs = []
    for _ in range(2):
        _, out, _ = run_cli(capsys, "--gen", "cycle:2", "--query", "path(X, Y)")
        runs.append(out)
    assert runs[0] == runs[1]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cctab.cli", "--gen", "chain:2", "--query", "path(1, X)"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["path(1, 2)", "path(1, 3)"]
