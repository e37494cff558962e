import subprocess
import sys

import pytest

from fista_lab.cli import main
from fista_lab.harness import InstanceSpec
from fista_lab.trace import Trace


def test_check_schedule_first_row(capsys):
    assert main(["check-schedule", "--scheme", "mod", "--p", "1", "--q", "1", "--r", "4", "--kmax", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,t_k,a_k"
    assert lines[1] == "1,1.6180339887498949,0"
    assert len(lines) == 4


def test_check_schedule_flags_cd_below_theory(capsys):
    assert main(["check-schedule", "--scheme", "cd", "--d", "2", "--kmax", "3"]) == 0
    out = capsys.readouterr()
    assert out.out.splitlines()[3] == "3,2.5,0.40000000000000002"
    assert "outside" in out.err


def test_check_schedule_rejects_bad_params(capsys):
    assert main(["check-schedule", "--scheme", "mod", "--p", "1.5"]) == 2


def test_verify_key_inequality_passes(capsys):
    assert main(["verify", "--suite", "key-inequality"]) == 0
    out = capsys.readouterr().out
    assert out and all(line.startswith("[PASS]") for line in out.splitlines())


def test_solve_missing_spec_is_usage_error(tmp_path, capsys):
    assert main(["solve", "--spec", str(tmp_path / "nope.txt")]) == 2
    assert "not found" in capsys.readouterr().err


def test_unknown_flag_exits_2():
    proc = subprocess.run([sys.executable, "-m", "fista_lab", "solve", "--spec", "x", "--frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "unrecognized arguments" in proc.stderr


def test_gen_then_solve_round_trip(tmp_path, capsys):
    spec_path = tmp_path / "inst.txt"
    assert main(["gen", "--kind", "sparse", "--m", "40", "--n", "80", "--structure", "5", "--seed", "3", "-o", str(spec_path)]) == 0
    assert InstanceSpec.read(spec_path) == InstanceSpec("sparse", 40, 80, 5, seed=3)
    out = tmp_path / "trace.csv"
    assert main(["solve", "--spec", str(spec_path), "--scheme", "lazy", "--record-objective", "-o", str(out)]) == 0
    trace = Trace.from_csv(out.read_text())
    assert trace[-1].norm_dx <= 1e-9
    assert all(r.obj is not None for r in trace)
    assert "stopped on tol" in capsys.readouterr().err


def test_compare_small_preset(tmp_path, capsys):
    code = main(["compare", "--preset", "l1", "--small", "--schemes", "bt", "lazy", "--seeds", "0", "--out-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "speedup vs bt" in out and "lazy" in out
    assert len(list(tmp_path.glob("*.csv"))) == 2


@pytest.mark.parametrize("argv", [["compare", "--kind", "sparse"], ["gen", "--preset", "l1", "--spec", "x"]])
def test_incomplete_instance_is_usage_error(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
