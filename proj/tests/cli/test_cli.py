#!/usr/bin/env python3
"""End-to-end checks of the padiclab command line tool."""

import argparse
import csv
import filecmp
import json
import math
import shutil
import subprocess
import sys
import traceback
from pathlib import Path

import jsonschema

ARGS = None
SCHEMA = None


def run(*argv, config_text=None, name="run", expect=None):
    """Runs padiclab and returns (exit code, stdout, stderr, output dir)."""
    work = ARGS.workdir / name
    if work.exists():
        shutil.rmtree(work)
    work.mkdir(parents=True)
    cmd = [str(ARGS.padiclab), *argv]
    if config_text is not None:
        cfg = work / "config.toml"
        cfg.write_text(config_text)
        cmd += ["--config", str(cfg)]
    out = work / "out"
    cmd += ["--out", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=600)
    if expect is not None and proc.returncode != expect:
        raise AssertionError(f"{' '.join(cmd)}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc.returncode, proc.stdout, proc.stderr, out


def report(out):
    doc = json.loads((out / "report.json").read_text())
    jsonschema.validate(doc, SCHEMA)
    return doc


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def lambda0(p, alpha, n):
    return (p - 1) / (p ** (alpha + 1) - 1) * p ** (alpha * (1 - n))


def test_verify_default_passes():
    code, stdout, _, out = run("verify", name="verify_default", expect=0)
    doc = report(out)
    assert doc["status"] == "pass"
    assert [s["name"] for s in doc["suites"]] == [
        "fourier", "diagonalization", "symbol_arbitration", "eigenpairs", "ags_identity", "norm_equivalence",
        "prox_step", "contraction", "lyapunov", "convergence", "negative_controls"]
    assert doc["config"]["grid"] == {"p": 2, "N": 1, "K": 3, "cell_cap": 1 << 20}
    assert doc["config"]["operator"]["alpha"] == 0.5 and doc["config"]["nonlinearity"]["m"] == 2.0
    assert stdout.count("PASS") == 11
    # Every check carries its measured value.
    assert all(c["value"] is not None for c in doc["checks"])
    assert len(rows(out / "checks.csv")) == len(doc["checks"])


def test_outputs_are_deterministic():
    for command in ("verify", "solve", "contraction", "symbol-verify"):
        _, _, _, a = run(command, "--quiet", name=f"det_{command}_a", expect=0)
        _, _, _, b = run(command, "--quiet", name=f"det_{command}_b", expect=0)
        files = sorted(p.name for p in a.iterdir())
        assert files == sorted(p.name for p in b.iterdir())
        for f in files:
            assert filecmp.cmp(a / f, b / f, shallow=False), f"{command}: {f} differs between runs"


def test_seed_changes_random_data():
    _, _, _, a = run("norms", "--seed", "1", name="seed_1", expect=0)
    _, _, _, b = run("norms", "--seed", "2", name="seed_2", expect=0)
    ra, rb = report(a), report(b)
    assert ra["seed"] == 1 and rb["seed"] == 2
    assert ra["results"]["l2"] != rb["results"]["l2"]


def test_corrupted_symbol_fails_with_named_suite():
    code, _, stderr, out = run("verify", "--inject-fault", "symbol", name="fault_symbol", expect=1)
    doc = report(out)
    assert doc["status"] == "fail" and doc["fault"]["active"]
    failed = {s["name"] for s in doc["suites"] if not s["passed"]}
    assert {"diagonalization", "ags_identity", "contraction"} <= failed, failed
    for name in ("diagonalization", "ags_identity", "contraction"):
        assert name in stderr, stderr
    code, _, stderr, _ = run("verify", "--inject-fault", "haar", name="fault_haar", expect=1)
    assert "diagonalization" in stderr and "contraction" in stderr


def test_config_errors_are_line_precise():
    _, _, err, _ = run("grid-info", config_text="seed = 3\n[grid]\np = 4\nN = 1\nK = 2\n", name="bad_prime", expect=2)
    assert "config.toml:3:" in err and "p must be prime" in err, err
    _, _, err, _ = run("grid-info", config_text="[grid]\np = 2\nN = 0\nK = 0\n", name="bad_size", expect=2)
    assert "config.toml:4:" in err and "N + K must be >= 1" in err, err
    _, _, err, _ = run("norms", config_text="[initial]\ngenerator = \"noise\"\n", name="bad_gen", expect=2)
    assert "config.toml:2:" in err and "unknown generator" in err, err
    _, _, err, _ = run("solve", config_text="[solver]\ntau = -1\n", name="bad_tau", expect=2)
    assert "tau must be positive" in err, err
    code, _, _, _ = run("solve", "--bogus", name="bad_flag")
    assert code == 2


def test_grid_info():
    _, stdout, _, out = run("grid-info", config_text="[grid]\np = 2\nN = 1\nK = 2\n", name="grid_info", expect=0)
    doc = report(out)
    assert doc["results"]["grid"]["M"] == 8
    assert math.isclose(doc["results"]["lambda0"], lambda0(2, 0.5, 1), rel_tol=1e-14)
    census = {s["abs_exponent"]: s["cells"] for s in doc["results"]["shell_census"]}
    assert census == {None: 1, -1: 1, 0: 2, 1: 4}
    assert len(rows(out / "cells.csv")) == 8
    assert "M = 8" in stdout


def test_symbol_verify_table():
    _, stdout, _, out = run("symbol-verify", name="symbol_verify", expect=0)
    doc = report(out)
    table = rows(out / "symbols.csv")
    assert len(table) == 16
    assert list(table[0].keys()) == [
        "b", "dual_norm", "brute", "table", "eigenvalue_ladder", "unit_prefactor", "ball_prefactor",
        "gap_eigenvalue_ladder", "gap_unit_prefactor", "gap_ball_prefactor"]
    assert abs(float(table[0]["brute"]) - lambda0(2, 0.5, 1)) <= 1e-12
    assert max(float(r["gap_eigenvalue_ladder"]) for r in table) < 1e-10
    assert doc["results"]["matching"] == ["eigenvalue_ladder"]
    assert "eigenvalue_ladder" in stdout


def test_norms_of_a_constant():
    _, _, _, out = run("norms", config_text="[initial]\ngenerator = \"psi0\"\n", name="norms_const", expect=0)
    report(out)
    for r in rows(out / "norms.csv"):
        s = float(r["s"])
        assert abs(float(r["ags_direct"])) == 0.0
        assert abs(float(r["ags_multiplier"])) < 1e-12
        assert math.isclose(float(r["c2"]), 2 * 2 ** (-2 * s), rel_tol=1e-12)


def test_norms_identity_on_random_data():
    _, _, _, out = run("norms", name="norms_random", expect=0)
    for r in rows(out / "norms.csv"):
        ratio = float(r["ags_direct"]) / float(r["ags_multiplier"])
        assert abs(ratio - 1) <= 1e-9


def test_solve_columns_and_linear_decay():
    text = "[grid]\np = 3\nN = 0\nK = 2\n[nonlinearity]\nm = 1.0\n[solver]\ntau = 0.1\nhorizon = 1.0\n" \
           "[initial]\ngenerator = \"psi0\"\n"
    _, _, _, out = run("solve", config_text=text, name="solve_linear", expect=0)
    doc = report(out)
    table = rows(out / "trajectory.csv")
    assert list(table[0].keys()) == ["t", "l2", "hminus1", "psi", "zero_mode_re", "zero_mode_im", "newton_iters",
                                     "residual"]
    assert len(table) == 11 and doc["results"]["steps"] == 10
    lam = lambda0(3, 0.5, 0)
    for n, r in enumerate(table):
        expected = lam ** -0.5 * (1 + 0.1 * lam) ** -n
        assert abs(float(r["hminus1"]) - expected) <= 1e-10 * expected, (n, r["hminus1"], expected)
    psi = [float(r["psi"]) for r in table]
    assert all(b <= a + 1e-12 for a, b in zip(psi, psi[1:]))


def test_solve_zero_initial_data():
    text = "[initial]\ngenerator = \"random\"\namplitude = 0.0\n"
    _, _, _, out = run("solve", config_text=text, name="solve_zero", expect=0)
    for r in rows(out / "trajectory.csv"):
        assert float(r["l2"]) == 0.0 and float(r["hminus1"]) == 0.0 and float(r["psi"]) == 0.0


def test_file_generator_round_trip():
    _, _, _, out = run("solve", name="solve_for_file", expect=0)
    state = out / "final_state.csv"
    text = f"[initial]\ngenerator = \"file\"\npath = \"{state}\"\n"
    _, _, _, out2 = run("norms", config_text=text, name="norms_from_file", expect=0)
    final = report(out)["results"]["final"]
    assert math.isclose(report(out2)["results"]["l2"], final["l2"], rel_tol=1e-14)


def test_non_convergence_exit_code():
    text = "[solver.prox]\ntolerance = 1e-30\nmax_newton_per_stage = 2\n"
    code, _, err, out = run("solve", config_text=text, name="solve_fail", expect=3)
    doc = report(out)
    assert doc["status"] == "non_convergence" and not doc["results"]["completed"]
    assert "did not converge" in err
    assert len(rows(out / "trajectory.csv")) == 1  # partial output: the initial state only


def test_contraction_and_convergence_tables():
    text = "[verify]\npairs = 3\n"
    _, _, _, out = run("contraction", config_text=text, name="contraction", expect=0)
    doc = report(out)
    table = rows(out / "contraction.csv")
    assert list(table[0].keys()) == ["m", "pair", "step", "t", "distance"]
    assert len(table) == 2 * 3 * 11
    assert {c["name"] for c in doc["checks"]} >= {"max_contraction_gap", "max_dissipation_identity_defect"}
    _, _, _, out = run("convergence", name="convergence", expect=0)
    table = rows(out / "convergence.csv")
    assert [float(r["tau"]) for r in table] == [0.1, 0.05, 0.025, 0.0125]
    orders = [float(r["order"]) for r in table[1:]]
    assert all(0.8 <= o <= 1.2 for o in orders), orders


def test_suite_selection():
    _, stdout, _, out = run("verify", config_text="[verify]\nsuites = [1, 4]\n", name="verify_subset", expect=0)
    assert [s["id"] for s in report(out)["suites"]] == [1, 4]


def main():
    global ARGS, SCHEMA
    parser = argparse.ArgumentParser()
    parser.add_argument("--padiclab", type=Path, required=True)
    parser.add_argument("--schema", type=Path, required=True)
    parser.add_argument("--workdir", type=Path, required=True)
    ARGS = parser.parse_args()
    SCHEMA = json.loads(ARGS.schema.read_text())
    jsonschema.Draft202012Validator.check_schema(SCHEMA)
    tests = [(name, fn) for name, fn in globals().items() if name.startswith("test_") and callable(fn)]
    failures = 0
    for name, fn in tests:
        try:
            fn()
            print(f"PASS {name}")
        except Exception:  # noqa: BLE001 - report every failure, keep going
            failures += 1
            print(f"FAIL {name}")
            traceback.print_exc()
    print(f"{len(tests) - failures}/{len(tests)} passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
