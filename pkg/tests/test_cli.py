import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from arnoldi_tikhonov import cli
from arnoldi_tikhonov.errors import BreakdownError, ConvergenceError
from arnoldi_tikhonov.mmio import load_matrix, load_vector
from arnoldi_tikhonov.problems import phillips_galerkin

SOLVE = ["solve", "--problem", "phillips_nystrom", "--n", "200", "--ell", "10", "--noise", "0.01", "--seed", "1"]


def test_generate(tmp_path):
    rc = cli.main(
        ["generate", "--problem", "phillips_galerkin", "--n", "16", "--out-matrix", str(tmp_path / "A.mtx"), "--out-x", str(tmp_path / "x.mtx")]
    )
    assert rc == 0
    p = phillips_galerkin(16)
    np.testing.assert_array_equal(load_matrix(tmp_path / "A.mtx"), p.A)
    np.testing.assert_array_equal(load_vector(tmp_path / "x.mtx"), p.x_exact)


def test_solve_writes_one_record(tmp_path):
    out = tmp_path / "r.csv"
    assert cli.main(SOLVE + ["--out", str(out)]) == 0
    data = out.read_bytes()
    rows = list(csv.DictReader(io.StringIO(data.decode())))
    assert len(rows) == 1 and rows[0]["problem"] == "phillips_nystrom" and rows[0]["runtime_ms"] == ""
    assert cli.main(SOLVE + ["--out", str(tmp_path / "s.csv")]) == 0
    assert (tmp_path / "s.csv").read_bytes() == data


def test_solve_options(tmp_path):
    out = tmp_path / "r.csv"
    args = SOLVE + ["--weight", "one-over-n", "--gap", "frobenius", "--skip-full", "--timing", "--out", str(out)]
    assert cli.main(args) == 0
    row = next(csv.DictReader(out.open(newline="")))
    assert row["weight"] == "one_over_n" and row["gap_method"] == "frobenius"
    assert row["rel_diff_full"] == "" and int(row["runtime_ms"]) >= 0


def test_solve_stdout(capsys):
    assert cli.main(SOLVE) == 0
    assert capsys.readouterr().out.startswith("problem,n,ell")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve", "--problem", "shaw", "--n", "10", "--ell", "2", "--noise", "0.01", "--seed", "0"],
        ["solve", "--problem", "phillips_nystrom", "--n", "ten", "--ell", "2", "--noise", "0.01", "--seed", "0"],
        ["generate", "--problem", "phillips_galerkin", "--n", "10", "--out-matrix", "a", "--out-x", "b"],
        ["solve", "--problem", "phillips_nystrom", "--n", "100", "--ell", "0", "--noise", "0.01", "--seed", "0"],
        ["table", "--id", "tab9"],
        ["table", "--id", "tab3", "--seeds", "a,b"],
    ],
)
def test_invalid_arguments_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == 2


def test_unwritable_output_exit_2(tmp_path):
    assert cli.main(SOLVE + ["--out", str(tmp_path / "missing" / "r.csv")]) == 2


def test_infeasible_exit_3():
    args = SOLVE.copy()
    args[args.index("0.01")] = "5"
    assert cli.main(args) == 3


@pytest.mark.parametrize(
    "exc, code",
    [(BreakdownError("invariant subspace", step=3), 4), (ConvergenceError("stalled", best_estimate=1.0, iterations=5), 5)],
)
def test_error_exit_codes(monkeypatch, exc, code):
    def boom(*args, **kwargs):
        raise exc

    monkeypatch.setattr(cli, "run_experiment", boom)
    assert cli.main(SOLVE) == code


def test_table_tab3_single_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("KRT_THREADS", "2")
    out = tmp_path / "t3.csv"
    assert cli.main(["table", "--id", "tab3", "--seeds", "0", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open(newline="")))
    assert len(rows) == 18
    sigma1 = np.array([float(r["sigma_max_H"]) for r in rows])
    assert np.all(np.abs(sigma1 / 5.80 - 1) <= 0.02)


def test_profile(tmp_path):
    out = tmp_path / "p.csv"
    args = ["profile", "--problem", "phillips_galerkin", "--n", "200", "--ell", "20", "--noise", "0.01", "--seed", "0"]
    assert cli.main(args + ["--out", str(out)]) == 0
    rows = list(csv.reader(out.open(newline="")))
    assert rows[0] == ["t", "x_exact", "x_computed"] and len(rows) == 201


def test_console_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "arnoldi_tikhonov", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "generate" in proc.stdout
