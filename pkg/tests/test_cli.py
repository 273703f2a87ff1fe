"""CLI contract: formats, determinism, exit codes."""

import json
import math
import subprocess
import sys

import pytest

import qclone.cli as cli
import qclone.verify
from qclone.family import build_family
from qclone.forms import discrete_form
from qclone.oracle import OracleInfeasibleError, embed_reduced
from qclone.reduced import optimize_reduced
from qclone.verify import CheckResult

_HALF_PI = "1.5707963267948966"


def _run(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "qclone", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )


def test_optimize_text_report_at_zero_spread() -> None:
    proc = _run("optimize", "--n-states", "2", "--phi", "0")
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert "fidelity 1.00000000000" in lines
    assert "denseness inf" in lines
    assert lines[0] == "phi 0.00000000000"


def test_optimize_json_keys_and_perfect_cloning() -> None:
    proc = _run("optimize", "--n-states", "2", "--phi", _HALF_PI, "--json")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert list(payload) == [
        "phi",
        "n_states",
        "fidelity",
        "eta",
        "xi",
        "c",
        "c_sign",
        "denseness",
        "shannon_entropy",
        "method_agreement",
        "root_residual",
    ]
    assert abs(payload["fidelity"] - 1.0) <= 1e-9
    assert payload["n_states"] == 2
    assert payload["c_sign"] == 1


def test_optimize_json_matches_library() -> None:
    proc = _run("optimize", "--n-states", "5", "--phi", "0.9", "--json")
    payload = json.loads(proc.stdout)
    fam = build_family(5, 0.9)
    opt = optimize_reduced(discrete_form(fam), fam)
    assert payload["fidelity"] == float(f"{opt.fidelity:.12g}")
    assert payload["eta"] == float(f"{opt.params.eta:.12g}")
    assert payload["xi"] == float(f"{opt.params.xi:.12g}")
    assert payload["c"] == float(f"{opt.params.c:.12g}")
    assert payload["denseness"] == float(f"{5 / 0.9:.12g}")
    assert payload["shannon_entropy"] == float(f"{math.log(5):.12g}")


def test_degrees_flag_converts_input_only() -> None:
    rad = _run("optimize", "--n-states", "3", "--phi", _HALF_PI)
    deg = _run("optimize", "--n-states", "3", "--phi", "90", "--degrees")
    assert rad.stdout == deg.stdout
    assert rad.stdout.startswith("phi 1.57079632679")


def test_sweep_is_deterministic() -> None:
    args = (
        "sweep",
        "--n-states",
        "2,4",
        "--continuum",
        "--phi-start",
        "0.1",
        "--phi-end",
        "1.2",
        "--steps",
        "5",
    )
    first = _run(*args)
    second = _run(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert first.stderr == ""


def test_sweep_csv_contract() -> None:
    proc = _run(
        "sweep",
        "--n-states",
        "3,2,3",
        "--continuum",
        "--phi-start",
        "0",
        "--phi-end",
        "0.6",
        "--steps",
        "3",
    )
    assert proc.returncode == 0
    assert proc.stdout.endswith("\n")
    lines = proc.stdout.splitlines()
    assert lines[0] == "phi,n_states,fidelity,eta,xi,c,c_sign"
    assert all(line == line.rstrip() for line in lines)
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 9  # three grid points for n=2, n=3, cont
    # duplicate n_states collapse; groups are ints ascending, then cont
    assert [r[1] for r in rows] == ["2"] * 3 + ["3"] * 3 + ["cont"] * 3
    for group in range(3):
        phis = [float(r[0]) for r in rows[3 * group : 3 * group + 3]]
        assert phis == sorted(phis)
    # every numeric token survives a 12-significant-digit round trip
    for row in rows:
        for tok in (row[0], row[2], row[3], row[4], row[5]):
            assert tok == f"{float(tok):#.12g}"
        assert row[6] in ("1", "-1")
    # zero spread clones perfectly
    assert rows[0][2] == "1.00000000000"


def test_sweep_degrees_equivalence() -> None:
    rad = _run(
        "sweep", "--n-states", "2", "--phi-start", "0", "--phi-end", _HALF_PI,
        "--steps", "4",
    )
    deg = _run(
        "sweep", "--n-states", "2", "--phi-start", "0", "--phi-end", "90",
        "--steps", "4", "--degrees",
    )
    assert rad.stdout == deg.stdout


def test_sweep_out_file_matches_stdout(tmp_path) -> None:
    args = (
        "sweep", "--n-states", "2,3", "--phi-start", "0.2", "--phi-end", "1.0",
        "--steps", "3",
    )
    streamed = _run(*args)
    target = tmp_path / "rows.csv"
    written = _run(*args, "--out", str(target))
    assert written.returncode == 0
    assert target.read_text() == streamed.stdout


def test_oracle_subcommand_reports_agreement() -> None:
    proc = _run(
        "oracle", "--n-states", "2", "--phi", "1.0", "--starts", "4",
        "--seed", "3", "--json",
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert abs(payload["difference"]) < 1e-4
    assert payload["max_residual"] < 1e-9
    assert payload["starts"] == 4
    for key in ("xi_gap", "eta_gap", "c_gap", "offdiag", "max_imag"):
        assert payload[key] < 1e-3


@pytest.mark.parametrize(
    "args",
    [
        ["optimize", "--n-states", "1", "--phi", "0.5"],
        ["optimize", "--n-states", "3", "--phi", "3.5"],
        ["optimize", "--n-states", "3", "--phi", "-0.1"],
        ["optimize", "--n-states", "3"],
        ["sweep", "--n-states", "2", "--phi-start", "0", "--phi-end", "1", "--steps", "1"],
        ["sweep", "--n-states", "2", "--phi-start", "0.8", "--phi-end", "0.2", "--steps", "3"],
        ["sweep", "--n-states", "x,2", "--phi-start", "0", "--phi-end", "1", "--steps", "3"],
        ["sweep", "--phi-start", "0", "--phi-end", "1", "--steps", "3"],
        ["oracle", "--n-states", "3", "--phi", "0.5", "--starts", "0"],
        ["--bogus"],
        [],
    ],
)
def test_usage_errors_exit_64(args: list[str]) -> None:
    proc = _run(*args)
    assert proc.returncode == 64
    assert proc.stdout == ""
    assert proc.stderr != ""


def test_verify_subcommand_passes() -> None:
    proc = _run("verify")
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert len(lines) >= 6
    assert all(line.startswith("PASS ") for line in lines)
    assert proc.stderr == ""


def test_verify_failure_exits_1(monkeypatch, capsys) -> None:
    monkeypatch.setattr(
        qclone.verify,
        "run_verification",
        lambda: [CheckResult("stub", False, "broken on purpose")],
    )
    rc = cli.main(["verify"])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.out.startswith("FAIL stub")
    assert "1 of 1 checks failed" in captured.err


def test_oracle_disagreement_exits_2(monkeypatch, capsys) -> None:
    fam = build_family(2, 1.0)
    opt = optimize_reduced(discrete_form(fam), fam)
    fake = (embed_reduced(opt.params), opt.fidelity + 1e-3)
    monkeypatch.setattr(cli, "oracle_optimize", lambda *a, **k: fake)
    rc = cli.main(["oracle", "--n-states", "2", "--phi", "1.0"])
    captured = capsys.readouterr()
    assert rc == 2
    assert "differ by" in captured.err


def test_oracle_infeasible_exits_3(monkeypatch, capsys) -> None:
    def boom(*a, **k):
        raise OracleInfeasibleError("no feasible candidate")

    monkeypatch.setattr(cli, "oracle_optimize", boom)
    rc = cli.main(["oracle", "--n-states", "2", "--phi", "1.0"])
    captured = capsys.readouterr()
    assert rc == 3
    assert "no feasible candidate" in captured.err
