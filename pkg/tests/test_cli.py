"""End-to-end tests for the grnlab command line driver.

Every test invokes cli.main() in process with an argv list and inspects
the files it writes into a temp directory.  Row counts come from the
grid-arithmetic identities (levels x methods x seeds); file contents are
cross-checked against the harness aggregates they are derived from.
"""

import csv
import json
import shutil
import subprocess

import numpy as np
import pytest

import grnlab
from grnlab.harness import DIAL_GRIDS, INTERACTION_GRID, \
    INTERACTION_GRID_SMALL
from grnlab.methods import METHOD_ORDER
from grnlab.cli import (
    AGG_COLUMNS,
    DELTA_COLUMNS,
    ERROR_COLUMNS,
    INTERACTION_AGG_COLUMNS,
    RAW_COLUMNS,
    SUMMARY_COLUMNS,
    WINNER_COLUMNS,
    main,
)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def read_header(path):
    with open(path, newline="") as fh:
        return next(csv.reader(fh))


@pytest.fixture(scope="module")
def dropout_run(tmp_path_factory):
    # one small but real sweep shared by several read-only tests
    out = tmp_path_factory.mktemp("cli") / "dropout"
    rc = main([
        "sweep", "--pathology", "dropout", "--methods", "pearson,mi",
        "--seeds", "2", "--out", str(out),
    ])
    assert rc == 0
    return out


def test_default_configuration_row_arithmetic():
    # published row counts follow from the grid constants and defaults:
    # sweep uses 10 seeds, interaction 5, the small corner grid 1
    per_dial = {name: len(grid) * len(METHOD_ORDER) * 10
                for name, grid in DIAL_GRIDS.items()}
    assert per_dial["dropout"] == 300
    assert sum(per_dial.values()) == 2100

    cells = (len(INTERACTION_GRID["dropout"])
             * len(INTERACTION_GRID["confounders"])
             * len(INTERACTION_GRID["density"]))
    assert cells * len(METHOD_ORDER) * 5 == 1920
    assert cells == 64

    small = (len(INTERACTION_GRID_SMALL["dropout"])
             * len(INTERACTION_GRID_SMALL["confounders"])
             * len(INTERACTION_GRID_SMALL["density"]))
    assert small * len(METHOD_ORDER) * 1 == 48


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == grnlab.__version__


def test_console_script_installed():
    proc = subprocess.run(["grnlab", "--version"], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == grnlab.__version__


def test_sweep_files_and_row_counts(dropout_run):
    prefix = dropout_run / "sweep_linear"
    for suffix in ("results.csv", "aggregate.csv", "deltas.csv",
                   "errors.csv", "manifest.json"):
        assert (dropout_run / f"sweep_linear_{suffix}").exists()

    raw = read_rows(f"{prefix}_results.csv")
    # 5 grid levels x 2 methods x 2 seeds
    assert len(raw) == 20
    assert read_header(f"{prefix}_results.csv") == RAW_COLUMNS
    assert {r["method"] for r in raw} == {"pearson", "mi"}
    assert {r["seed"] for r in raw} == {"0", "1"}
    assert all(r["pathology"] == "dropout" for r in raw)
    assert all(float(r["runtime_s"]) > 0 for r in raw)

    agg = read_rows(f"{prefix}_aggregate.csv")
    assert read_header(f"{prefix}_aggregate.csv") == AGG_COLUMNS
    assert len(agg) == 10
    assert all(r["replicates"] == "2" for r in agg)
    assert all(r["single_replicate"] == "False" for r in agg)

    # aggregate means must reproduce the raw rows they summarize
    for rec in agg:
        members = [float(r["auprc_undirected"]) for r in raw
                   if r["level"] == rec["level"]
                   and r["method"] == rec["method"]]
        assert len(members) == 2
        assert np.isclose(float(rec["auprc_undirected_mean"]),
                          np.mean(members), atol=1e-12)

    deltas = read_rows(f"{prefix}_deltas.csv")
    assert read_header(f"{prefix}_deltas.csv") == DELTA_COLUMNS
    assert len(deltas) == 2
    for rec in deltas:
        assert rec["easiest_level"] == "0.0"
        assert rec["hardest_level"] == "0.8"
        drop = float(rec["mean_hardest"]) - float(rec["mean_easiest"])
        assert np.isclose(float(rec["delta"]), drop, atol=1e-12)

    errors = read_rows(f"{prefix}_errors.csv")
    assert read_header(f"{prefix}_errors.csv") == ERROR_COLUMNS
    assert len(errors) == 10


def test_sweep_manifest_contents(dropout_run):
    with open(dropout_run / "sweep_linear_manifest.json") as fh:
        manifest = json.load(fh)
    assert set(manifest) == {"version", "command", "config", "seeds",
                             "outputs", "started", "finished"}
    assert manifest["version"] == grnlab.__version__
    assert manifest["command"] == "sweep"
    assert manifest["seeds"] == [0, 1]
    assert manifest["config"]["pathology"] == "dropout"
    assert manifest["config"]["methods"] == ["pearson", "mi"]
    # same ISO-8601 format, so string order is time order
    assert manifest["started"] <= manifest["finished"]
    paths = list(manifest["outputs"].values())
    assert len(paths) == 5
    for p in paths:
        assert (dropout_run / p.split("/")[-1]).exists()


def test_sweep_stdout_reports_row_count(tmp_path, capsys):
    out = tmp_path / "run"
    rc = main([
        "sweep", "--pathology", "dropout", "--levels", "0,0.8",
        "--methods", "pearson", "--seeds", "1", "--out", str(out),
    ])
    assert rc == 0
    text = capsys.readouterr().out
    assert "wrote 2 rows" in text
    assert "sweep_linear_results.csv" in text


def test_derived_files_byte_stable_across_reruns(tmp_path):
    argv_tail = ["--pathology", "dropout", "--levels", "0,0.8",
                 "--methods", "pearson,mi", "--seeds", "1"]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", *argv_tail, "--out", str(out_a)]) == 0
    assert main(["sweep", *argv_tail, "--out", str(out_b)]) == 0

    for name in ("aggregate", "deltas", "errors"):
        fa = (out_a / f"sweep_linear_{name}.csv").read_bytes()
        fb = (out_b / f"sweep_linear_{name}.csv").read_bytes()
        assert fa == fb, f"{name} file not reproducible"

    # raw results may differ only in the wall-clock column
    rows_a = read_rows(out_a / "sweep_linear_results.csv")
    rows_b = read_rows(out_b / "sweep_linear_results.csv")
    assert len(rows_a) == len(rows_b) == 4
    for ra, rb in zip(rows_a, rows_b):
        for col in RAW_COLUMNS:
            if col == "runtime_s":
                continue
            assert ra[col] == rb[col]


def test_unknown_method_exits_two(tmp_path, capsys):
    rc = main(["sweep", "--pathology", "dropout", "--methods",
               "pearson,bogus", "--out", str(tmp_path)])
    assert rc == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "bogus" in err
    assert "notears" in err  # message lists the valid choices


def test_unknown_pathology_exits_two(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--pathology", "zeal", "--out", str(tmp_path)])
    assert exc.value.code == 2
    assert "invalid choice" in capsys.readouterr().err


def test_unparsable_levels_exit_two(tmp_path, capsys):
    rc = main(["sweep", "--pathology", "dropout", "--levels", "0,high",
               "--out", str(tmp_path)])
    assert rc == 2
    assert "could not parse" in capsys.readouterr().err


def test_levels_with_all_pathologies_rejected(tmp_path, capsys):
    rc = main(["sweep", "--levels", "0,0.8", "--out", str(tmp_path)])
    assert rc == 2
    assert "--pathology all" in capsys.readouterr().err


def test_off_grid_level_needs_extrapolation_flag(tmp_path, capsys):
    out = tmp_path / "run"
    rc = main(["sweep", "--pathology", "dropout", "--levels", "0,0.9",
               "--methods", "pearson", "--seeds", "1", "--out", str(out)])
    assert rc == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "0.9" in err
    assert not (out / "sweep_linear_results.csv").exists()

    rc = main(["sweep", "--pathology", "dropout", "--levels", "0,0.9",
               "--methods", "pearson", "--seeds", "1", "--out", str(out),
               "--allow-extrapolation"])
    assert rc == 0
    text = capsys.readouterr().out
    raw = read_rows(out / "sweep_linear_results.csv")
    assert len(raw) == 2
    assert sorted(float(r["level"]) for r in raw) == [0.0, 0.9]
    # the hardest grid level was not run, so no endpoint delta exists
    assert "skipping delta table" in text
    assert not (out / "sweep_linear_deltas.csv").exists()
    with open(out / "sweep_linear_manifest.json") as fh:
        manifest = json.load(fh)
    assert "deltas" not in manifest["outputs"]
    for p in manifest["outputs"].values():
        assert (out / p.split("/")[-1]).exists()


def test_interaction_small_grid_full_methods(tmp_path):
    out = tmp_path / "run"
    rc = main(["interaction", "--seeds", "1", "--grid-small",
               "--out", str(out)])
    assert rc == 0

    raw = read_rows(out / "interaction_results.csv")
    # 2x2x2 corner cells x 6 methods x 1 seed
    assert len(raw) == 48
    assert read_header(out / "interaction_results.csv") == RAW_COLUMNS
    assert all(r["pathology"] == "interaction" for r in raw)
    levels = {r["level"] for r in raw}
    assert len(levels) == 8
    for label in levels:
        d, k, rho = label.split("|")
        assert float(d) in (0.0, 0.8)
        assert float(k) in (0.0, 16.0)
        assert float(rho) in (0.05, 0.3)

    agg = read_rows(out / "interaction_aggregate.csv")
    assert read_header(out / "interaction_aggregate.csv") \
        == INTERACTION_AGG_COLUMNS
    assert len(agg) == 48
    assert all(r["single_replicate"] == "True" for r in agg)

    winners = read_rows(out / "interaction_winners.csv")
    assert read_header(out / "interaction_winners.csv") == WINNER_COLUMNS
    assert len(winners) == 8
    for w in winners:
        cell = [r for r in agg if r["dropout"] == w["dropout"]
                and r["confounders"] == w["confounders"]
                and r["density"] == w["density"]]
        assert len(cell) == 6
        best = max(float(r["auprc_undirected_mean"]) for r in cell)
        assert float(w["auprc"]) == best
        names = [r["method"] for r in cell
                 if float(r["auprc_undirected_mean"]) == best]
        assert w["winner"] == sorted(names)[0]
        assert w["tie"] == str(len(names) > 1)

    summary = read_rows(out / "interaction_summary.csv")
    assert read_header(out / "interaction_summary.csv") == SUMMARY_COLUMNS
    assert [r["method"] for r in summary] == sorted(
        ["pearson", "mi", "genie3", "pc", "ges", "notears"])
    for rec in summary:
        parts = (float(rec["delta_d"]) + float(rec["delta_k"])
                 + float(rec["delta_rho"]))
        gap = float(rec["delta_joint"]) - parts
        assert np.isclose(float(rec["interaction"]), gap, atol=1e-12)

    with open(out / "interaction_manifest.json") as fh:
        manifest = json.load(fh)
    assert manifest["command"] == "interaction"
    assert manifest["config"]["grid_small"] is True
    assert manifest["seeds"] == [0]
    assert len(manifest["outputs"]) == 5
    for p in manifest["outputs"].values():
        assert (out / p.split("/")[-1]).exists()


def test_report_requires_sweep_results(tmp_path, capsys):
    empty = tmp_path / "none"
    empty.mkdir()
    rc = main(["report", "--out", str(empty)])
    assert rc == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "sweep_linear_results.csv" in err


def test_report_tables(dropout_run, capsys):
    rc = main(["report", "--out", str(dropout_run)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "skipping linear-vs-tanh overlay" in text
    assert not (dropout_run / "report_overlay.csv").exists()

    deg = read_rows(dropout_run / "report_degradation.csv")
    assert read_header(dropout_run / "report_degradation.csv") == [
        "pathology", "level", "method", "metric", "mean", "sem"]
    # 5 levels x 2 methods x 2 metrics
    assert len(deg) == 20
    assert {r["metric"] for r in deg} == {"undirected", "directed"}

    frac = read_rows(dropout_run / "report_error_fractions.csv")
    assert len(frac) == 2  # hardest level only, one row per method
    assert all(r["level"] == "0.8" for r in frac)
    for r in frac:
        total = (float(r["frac_true"]) + float(r["frac_reversed"])
                 + float(r["frac_confounded"]) + float(r["frac_spurious"]))
        assert abs(total - 1.0) <= 1e-9

    pareto = read_rows(dropout_run / "report_pareto.csv")
    assert read_header(dropout_run / "report_pareto.csv") == [
        "method", "mean_auprc_undirected", "mean_runtime_s"]
    assert [r["method"] for r in pareto] == ["mi", "pearson"]
    by_name = {r["method"]: r for r in pareto}
    assert 0.0 <= float(by_name["pearson"]["mean_auprc_undirected"]) <= 1.0
    assert (float(by_name["pearson"]["mean_runtime_s"])
            < float(by_name["mi"]["mean_runtime_s"]))


def test_report_overlay_when_tanh_present(dropout_run):
    # a tanh results file with identical content must overlay exactly
    shutil.copy(dropout_run / "sweep_linear_results.csv",
                dropout_run / "sweep_tanh_results.csv")
    try:
        assert main(["report", "--out", str(dropout_run)]) == 0
        overlay = read_rows(dropout_run / "report_overlay.csv")
        assert read_header(dropout_run / "report_overlay.csv") == [
            "pathology", "level", "method", "metric",
            "mean_linear", "mean_tanh"]
        assert len(overlay) == 20
        for r in overlay:
            assert r["mean_linear"] == r["mean_tanh"]
    finally:
        (dropout_run / "sweep_tanh_results.csv").unlink()
