"""CLI surface: subcommands, alpha-cut CSV format, exit codes, parser fuzzing."""

import subprocess
import sys

import numpy as np
import pytest

from fuzzcalc.cli import read_alpha_csv, run, write_alpha_csv
from fuzzcalc.core import (
    AlphaGrid,
    hausdorff_distance,
    make_triangular,
    singleton,
)

GRID = AlphaGrid.uniform()

WORKED_PROBLEM = """\
# fully fuzzy quadratic growth, one Taylor step of order 2
command = solve-ivp
rhs = x^2 + y^2
x0 = T(0.7, 1, 1.2)
y0 = T(2.1, 2.3, 2.5)
h = T(0.07, 0.1, 0.12)
order = 2
steps = 1
"""


def data_rows(path):
    with open(path) as fh:
        return [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]


# -- alpha tables -------------------------------------------------------------------


def test_write_singleton_three_levels(tmp_path):
    out = tmp_path / "zero.csv"
    write_alpha_csv(singleton(0.0, AlphaGrid.uniform(3)), out)
    rows = data_rows(out)
    assert rows[0] == "alpha,lower,upper"
    parsed = [tuple(float(x) for x in r.split(",")) for r in rows[1:]]
    assert parsed == [(0.0, 0.0, 0.0), (0.5, 0.0, 0.0), (1.0, 0.0, 0.0)]


def test_write_triangular_midrow_formatting(tmp_path):
    out = tmp_path / "t.csv"
    write_alpha_csv(make_triangular((2.1, 2.3, 2.5), GRID), out)
    rows = data_rows(out)
    # row at alpha = 0.5: 2.1 + 0.2*0.5 and 2.5 - 0.2*0.5
    assert rows[1 + 50] == "0.5,2.2,2.4"


def test_csv_round_trip_is_exact(tmp_path):
    a = make_triangular((0.7, 1.0, 1.2), GRID) * make_triangular((2.1, 2.3, 2.5), GRID)
    out = tmp_path / "prod.csv"
    write_alpha_csv(a, out, metadata={"command": "test", "generated": "whenever"})
    b = read_alpha_csv(out)
    assert hausdorff_distance(a, b) <= 1e-9


def test_csv_deterministic_outside_metadata(tmp_path):
    a = make_triangular((1, 2, 3), GRID)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_alpha_csv(a, p1, metadata={"generated": "run-1"})
    write_alpha_csv(a, p2, metadata={"generated": "run-2"})
    assert data_rows(p1) == data_rows(p2)


def test_csv_ends_with_lf_newline(tmp_path):
    out = tmp_path / "t.csv"
    write_alpha_csv(singleton(1.0, AlphaGrid.uniform(3)), out)
    raw = out.read_bytes()
    assert raw.endswith(b"\n") and b"\r" not in raw


# -- eval / derive -------------------------------------------------------------------


def test_eval_addition(capsys):
    assert run(["eval", "--expr", "T(1,2,3) + T(1,2,3)"]) == 0
    out = capsys.readouterr().out
    assert "value triplet (2dp): (2.00, 4.00, 6.00)" in out


def test_eval_writes_table(tmp_path, capsys):
    out = tmp_path / "v.csv"
    code = run(["eval", "--expr", "x^2", "--bind", "x=T(1,2,3)",
                "--alphas", "11", "--out", str(out)])
    assert code == 0
    value = read_alpha_csv(out)
    assert value.grid.resolution == 11
    assert value.support.lo == pytest.approx(1.0)
    assert value.support.hi == pytest.approx(9.0)


def test_derive_square(capsys):
    assert run(["derive", "--expr", "x^2", "--var", "x", "--bind", "x=T(1,2,3)"]) == 0
    out = capsys.readouterr().out
    assert "derivative triplet (2dp): (2.00, 4.00, 6.00)" in out
    assert "converged: True" in out


# -- series ---------------------------------------------------------------------------


def test_series_symbolic_rule(capsys):
    code = run(["series", "--coeff-rule", "n / T(4,5,6)^(n-1)"])
    assert code == 0
    out = capsys.readouterr().out
    assert "radius mode: symbolic-ratio" in out
    assert "radius triplet (2dp): (4.00, 5.00, 6.00)" in out


def test_series_four_quotient_constant(capsys):
    code = run(["series", "--coeff-rule", "T(1,2,3)", "--radius-mode", "four-quotient"])
    assert code == 0
    out = capsys.readouterr().out
    assert "radius mode: four-quotient" in out
    # support [1/3, 3]
    assert "radius triplet (2dp): (0.33, 1.00, 3.00)" in out


def test_series_taylor_exp_is_everywhere_convergent(capsys):
    code = run(["series", "--taylor-of", "exp(x)", "--var", "x",
                "--center", "T(-1,0,1)", "--order", "10"])
    assert code == 0
    out = capsys.readouterr().out
    assert "radius: infinite" in out
    assert "ratio test converges: True" in out


# -- solve-ivp ---------------------------------------------------------------------------


def test_solve_ivp_problem_file(tmp_path, capsys):
    pf = tmp_path / "problem.txt"
    pf.write_text(WORKED_PROBLEM)
    table = tmp_path / "y.csv"
    assert run(["solve-ivp", "--file", str(pf), "--out", str(table)]) == 0
    out = capsys.readouterr().out
    assert "y triplet (2dp): (2.49, 3.08, 3.71)" in out
    rows = data_rows(table)
    assert len(rows) == 1 + 101
    # final row is the core: both envelopes at the crisp 3.08367
    alpha, lo, hi = (float(x) for x in rows[-1].split(","))
    assert alpha == 1.0
    assert lo == pytest.approx(3.08367, abs=1e-12)
    assert hi == pytest.approx(3.08367, abs=1e-12)


def test_solve_ivp_inline_flags(capsys):
    code = run(["solve-ivp", "--rhs", "x^2 + y^2", "--x0", "T(0.7,1,1.2)",
                "--y0", "T(2.1,2.3,2.5)", "--h", "T(0.07,0.1,0.12)",
                "--order", "2", "--steps", "1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "y triplet (2dp): (2.49, 3.08, 3.71)" in out
    # 1.2 + 0.12 must display as 1.32 despite float dust below the 2dp cut
    assert "x triplet (2dp): (0.77, 1.10, 1.32)" in out


def test_solve_ivp_flags_override_file(tmp_path, capsys):
    pf = tmp_path / "problem.txt"
    pf.write_text(WORKED_PROBLEM)
    assert run(["solve-ivp", "--file", str(pf), "--steps", "2"]) == 0
    out = capsys.readouterr().out
    assert "step 2 truncation magnitude" in out


# -- exit codes ------------------------------------------------------------------------------


def test_exit_2_on_bad_expression(capsys):
    assert run(["eval", "--expr", "x + * y"]) == 2
    assert "ExprSyntaxError" in capsys.readouterr().err


def test_exit_2_on_unknown_function(capsys):
    assert run(["eval", "--expr", "tan(x)", "--bind", "x=1"]) == 2
    assert "UnknownFunction" in capsys.readouterr().err


def test_exit_1_on_domain_error(capsys):
    code = run(["eval", "--expr", "T(1,2,3) / T(-1,0,1)"])
    assert code == 1
    assert "DivisorStraddlesZero" in capsys.readouterr().err


def test_exit_1_on_unbound_variable(capsys):
    assert run(["eval", "--expr", "x + 1"]) == 1
    assert "UnboundVariable" in capsys.readouterr().err


def test_exit_2_on_usage_errors(tmp_path, capsys):
    assert run(["eval"]) == 2  # missing --expr
    assert run(["no-such-command"]) == 2
    assert run(["solve-ivp", "--rhs", "y"]) == 2  # missing fields
    capsys.readouterr()
    bad = tmp_path / "bad.txt"
    bad.write_text("rhs = y\nwhat = ever\n")
    assert run(["solve-ivp", "--file", str(bad)]) == 2
    assert "ProblemFileError" in capsys.readouterr().err


def test_exit_2_on_bad_binding(capsys):
    assert run(["eval", "--expr", "x", "--bind", "x:T(1,2,3)"]) == 2
    assert run(["eval", "--expr", "x", "--bind", "x=T(3,2,1)"]) == 1  # malformed triplet


def test_parser_fuzz_never_crashes(capsys):
    rng = np.random.default_rng(20240817)
    for _ in range(150):
        length = int(rng.integers(1, 40))
        garbage = bytes(rng.integers(32, 127, size=length)).decode("ascii")
        code = run(["eval", "--expr", garbage])
        assert code in (0, 1, 2)
        capsys.readouterr()
    # plainly malformed inputs report usage errors specifically
    for text in ("((((", "1 +", "T(", ")(", "^^", "@#$%"):
        assert run(["eval", "--expr", text]) == 2
        capsys.readouterr()


def test_module_entry_point_help():
    proc = subprocess.run(
        [sys.executable, "-m", "fuzzcalc", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "solve-ivp" in proc.stdout
