"""Command-line driver: runs sweeps and emits CSV/JSON result tables.

Three subcommands mirror the analysis layers: ``sweep`` (single-dial
degradation), ``interaction`` (factorial dropout x confounders x density),
and ``report`` (plot-ready long-format tables from stored raw results).
All CSVs are long format with fixed, documented column order.  Runtime is
recorded only in the raw results files; every derived file is free of timing
so repeated runs produce byte-identical output.
"""

import argparse
import csv
import json
import sys

import numpy as np
from datetime import datetime, timezone
from pathlib import Path
from dataclasses import dataclass, asdict, field

from . import __version__
from .methods import METHOD_ORDER
from . import harness
from .harness import (
    DIAL_GRIDS,
    INTERACTION_GRID,
    INTERACTION_GRID_SMALL,
    RAW_COLUMNS,
)

AGG_COLUMNS = [
    "scm_kind", "pathology", "level", "method", "replicates", "single_replicate",
    "auprc_undirected_mean", "auprc_undirected_sem",
    "auprc_directed_mean", "auprc_directed_sem",
]

DELTA_COLUMNS = [
    "scm_kind", "pathology", "method", "easiest_level", "hardest_level",
    "mean_easiest", "mean_hardest", "delta", "most_robust", "most_fragile",
]

ERROR_COLUMNS = [
    "scm_kind", "pathology", "level", "method",
    "true_mean", "reversed_mean", "confounded_mean", "spurious_mean",
    "missed_mean", "selected_mean", "k_mean",
    "frac_true", "frac_reversed", "frac_confounded", "frac_spurious",
    "frac_missed",
]

INTERACTION_AGG_COLUMNS = [
    "dropout", "confounders", "density", "method", "replicates",
    "single_replicate",
    "auprc_undirected_mean", "auprc_undirected_sem",
    "auprc_directed_mean", "auprc_directed_sem",
]

WINNER_COLUMNS = ["dropout", "confounders", "density", "winner", "auprc", "tie"]

SUMMARY_COLUMNS = [
    "method", "auprc0", "delta_joint", "delta_d", "delta_k", "delta_rho",
    "interaction",
]


@dataclass
class RunManifest:
    version: str
    command: str
    config: dict
    seeds: list
    outputs: dict
    started: str
    finished: str = ""

    def write(self, path):
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _now():
    return datetime.now(timezone.utc).isoformat()


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([str(row[c]) for c in columns])


def _error_rows(raw_rows):
    """Aggregate decomposition counts per cell and normalize them:
    the four prediction categories over selected edges, missed over K."""
    counts = ("true", "reversed", "confounded", "spurious", "missed",
              "selected", "k_edges")
    agg = harness.aggregate(
        raw_rows, ("scm_kind", "pathology", "level", "method"),
        value_keys=counts,
    )
    out = []
    for rec in agg:
        sel = rec["selected_mean"]
        k = rec["k_edges_mean"]
        row = {
            "scm_kind": rec["scm_kind"],
            "pathology": rec["pathology"],
            "level": rec["level"],
            "method": rec["method"],
            "true_mean": rec["true_mean"],
            "reversed_mean": rec["reversed_mean"],
            "confounded_mean": rec["confounded_mean"],
            "spurious_mean": rec["spurious_mean"],
            "missed_mean": rec["missed_mean"],
            "selected_mean": sel,
            "k_mean": k,
        }
        for cat in ("true", "reversed", "confounded", "spurious"):
            row[f"frac_{cat}"] = rec[f"{cat}_mean"] / sel if sel > 0 else 0.0
        row["frac_missed"] = rec["missed_mean"] / k if k > 0 else 0.0
        out.append(row)
    return out


def _parse_levels(text):
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"could not parse levels {text!r} as numbers")


def _parse_methods(text):
    methods = [tok.strip() for tok in text.split(",") if tok.strip()]
    bad = [m for m in methods if m not in METHOD_ORDER]
    if bad:
        raise ValueError(
            f"unknown methods {bad}; valid: {', '.join(METHOD_ORDER)}"
        )
    return methods


def cmd_sweep(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    methods = _parse_methods(args.methods) if args.methods else list(METHOD_ORDER)
    seeds = harness.default_seeds(args.seeds)
    levels = _parse_levels(args.levels) if args.levels else None
    started = _now()

    if args.pathology == "all":
        if levels is not None:
            raise ValueError("--levels cannot be combined with --pathology all")
        table = harness.run_all_dials(methods=methods, seeds=seeds,
                                      scm_kind=args.scm, jobs=args.jobs)
    else:
        table = harness.run_single_dial_sweep(
            args.pathology, levels=levels, methods=methods, seeds=seeds,
            scm_kind=args.scm, jobs=args.jobs,
            allow_extrapolation=args.allow_extrapolation,
        )

    # the delta table needs both grid endpoints; a run restricted to
    # other levels still produces the raw, aggregate and error files
    want_deltas = True
    if levels is not None and args.pathology != "all":
        grid = DIAL_GRIDS[args.pathology]
        want_deltas = any(np.isclose(v, grid[0]) for v in levels) and any(
            np.isclose(v, grid[-1]) for v in levels
        )

    prefix = f"sweep_{args.scm}"
    paths = {
        "results": out / f"{prefix}_results.csv",
        "aggregate": out / f"{prefix}_aggregate.csv",
        "errors": out / f"{prefix}_errors.csv",
        "manifest": out / f"{prefix}_manifest.json",
    }
    if want_deltas:
        paths["deltas"] = out / f"{prefix}_deltas.csv"
    write_csv(paths["results"], RAW_COLUMNS, table.rows)
    agg = harness.aggregate(table, ("scm_kind", "pathology", "level", "method"))
    write_csv(paths["aggregate"], AGG_COLUMNS, agg)
    if want_deltas:
        deltas = harness.compute_delta_table(table)
        write_csv(paths["deltas"], DELTA_COLUMNS, deltas)
    else:
        print("note: skipping delta table, levels do not span the dial grid")
    write_csv(paths["errors"], ERROR_COLUMNS, _error_rows(table.rows))
    manifest = RunManifest(
        version=__version__,
        command="sweep",
        config={
            "pathology": args.pathology,
            "levels": levels,
            "methods": methods,
            "scm": args.scm,
            "jobs": args.jobs,
            "allow_extrapolation": args.allow_extrapolation,
            "out": str(out),
        },
        seeds=seeds,
        outputs={k: str(v) for k, v in paths.items()},
        started=started,
        finished=_now(),
    )
    manifest.write(paths["manifest"])
    print(f"wrote {len(table.rows)} rows to {paths['results']}")
    return 0


def cmd_interaction(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    methods = _parse_methods(args.methods) if args.methods else list(METHOD_ORDER)
    seeds = harness.default_seeds(args.seeds)
    grid = INTERACTION_GRID_SMALL if args.grid_small else INTERACTION_GRID
    started = _now()
    table = harness.run_interaction_sweep(grid=grid, methods=methods,
                                          seeds=seeds, jobs=args.jobs,
                                          scm_kind=args.scm)
    paths = {
        "results": out / "interaction_results.csv",
        "aggregate": out / "interaction_aggregate.csv",
        "winners": out / "interaction_winners.csv",
        "summary": out / "interaction_summary.csv",
        "manifest": out / "interaction_manifest.json",
    }
    write_csv(paths["results"], RAW_COLUMNS, table.rows)
    agg = harness.aggregate(
        table, ("cell_dropout", "cell_confounders", "cell_density", "method")
    )
    agg_rows = []
    for rec in agg:
        row = dict(rec)
        row["dropout"] = row.pop("cell_dropout")
        row["confounders"] = row.pop("cell_confounders")
        row["density"] = row.pop("cell_density")
        agg_rows.append(row)
    write_csv(paths["aggregate"], INTERACTION_AGG_COLUMNS, agg_rows)
    write_csv(paths["winners"], WINNER_COLUMNS, harness.winner_map(table))
    summary = harness.compute_interaction_summary(table)
    write_csv(paths["summary"], SUMMARY_COLUMNS, summary.rows)
    manifest = RunManifest(
        version=__version__,
        command="interaction",
        config={
            "grid": grid,
            "methods": methods,
            "scm": args.scm,
            "jobs": args.jobs,
            "grid_small": args.grid_small,
            "out": str(out),
        },
        seeds=seeds,
        outputs={k: str(v) for k, v in paths.items()},
        started=started,
        finished=_now(),
    )
    manifest.write(paths["manifest"])
    print(f"wrote {len(table.rows)} rows to {paths['results']}")
    return 0


def _load_raw(path):
    import pandas as pd

    return pd.read_csv(path)


def cmd_report(args):
    import pandas as pd

    out = Path(args.out)
    linear_path = out / "sweep_linear_results.csv"
    if not linear_path.exists():
        raise FileNotFoundError(
            f"missing input file {linear_path}; run `grnlab sweep` first"
        )
    raw = _load_raw(linear_path)
    rows = raw.to_dict("records")

    # degradation curves, long format over both metrics
    agg = harness.aggregate(rows, ("pathology", "level", "method"))
    degradation = []
    for rec in agg:
        for metric, col in (("undirected", "auprc_undirected"),
                            ("directed", "auprc_directed")):
            degradation.append({
                "pathology": rec["pathology"],
                "level": rec["level"],
                "method": rec["method"],
                "metric": metric,
                "mean": rec[f"{col}_mean"],
                "sem": rec[f"{col}_sem"],
            })
    deg_cols = ["pathology", "level", "method", "metric", "mean", "sem"]
    write_csv(out / "report_degradation.csv", deg_cols, degradation)

    # stacked error fractions at each dial's hardest observed level
    err = _error_rows(rows)
    frac_rows = []
    for pathology in sorted({r["pathology"] for r in err}):
        members = [r for r in err if r["pathology"] == pathology]
        grid = DIAL_GRIDS.get(pathology, [])
        present = {r["level"] for r in members}
        hardest = None
        for lv in reversed(grid):
            if lv in present:
                hardest = lv
                break
        if hardest is None:
            hardest = max(present)
        for r in sorted(members, key=lambda r: r["method"]):
            if r["level"] == hardest:
                frac_rows.append({
                    "pathology": pathology,
                    "level": hardest,
                    "method": r["method"],
                    "frac_true": r["frac_true"],
                    "frac_reversed": r["frac_reversed"],
                    "frac_confounded": r["frac_confounded"],
                    "frac_spurious": r["frac_spurious"],
                    "frac_missed": r["frac_missed"],
                })
    frac_cols = ["pathology", "level", "method", "frac_true", "frac_reversed",
                 "frac_confounded", "frac_spurious", "frac_missed"]
    write_csv(out / "report_error_fractions.csv", frac_cols, frac_rows)

    # accuracy vs cost
    pareto = []
    for method in sorted(raw["method"].unique()):
        sub = raw[raw["method"] == method]
        pareto.append({
            "method": method,
            "mean_auprc_undirected": float(sub["auprc_undirected"].mean()),
            "mean_runtime_s": float(sub["runtime_s"].mean()),
        })
    write_csv(out / "report_pareto.csv",
              ["method", "mean_auprc_undirected", "mean_runtime_s"], pareto)

    # linear vs nonlinear overlay when a tanh sweep is available
    tanh_path = out / "sweep_tanh_results.csv"
    outputs = ["report_degradation.csv", "report_error_fractions.csv",
               "report_pareto.csv"]
    if tanh_path.exists():
        t_agg = harness.aggregate(
            _load_raw(tanh_path).to_dict("records"),
            ("pathology", "level", "method"),
        )
        t_means = {
            (r["pathology"], r["level"], r["method"]):
                (r["auprc_undirected_mean"], r["auprc_directed_mean"])
            for r in t_agg
        }
        overlay = []
        for rec in agg:
            key = (rec["pathology"], rec["level"], rec["method"])
            if key not in t_means:
                continue
            for mi, metric in ((0, "undirected"), (1, "directed")):
                col = "auprc_undirected" if mi == 0 else "auprc_directed"
                overlay.append({
                    "pathology": rec["pathology"],
                    "level": rec["level"],
                    "method": rec["method"],
                    "metric": metric,
                    "mean_linear": rec[f"{col}_mean"],
                    "mean_tanh": t_means[key][mi],
                })
        write_csv(out / "report_overlay.csv",
                  ["pathology", "level", "method", "metric",
                   "mean_linear", "mean_tanh"], overlay)
        outputs.append("report_overlay.csv")
    else:
        print(f"note: {tanh_path} not found, skipping linear-vs-tanh overlay")
    print(f"wrote {', '.join(outputs)} in {out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="grnlab",
        description="Pathology sweeps for network-inference benchmarking",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sweep", help="single-dial degradation sweep")
    ps.add_argument("--pathology", default="all",
                    choices=list(DIAL_GRIDS) + ["all"])
    ps.add_argument("--levels", default=None,
                    help="comma-separated level overrides")
    ps.add_argument("--methods", default=None,
                    help=f"comma-separated subset of {','.join(METHOD_ORDER)}")
    ps.add_argument("--seeds", type=int, default=10,
                    help="number of replicate seeds (0..N-1)")
    ps.add_argument("--scm", default="linear", choices=["linear", "tanh"])
    ps.add_argument("--out", default="results")
    ps.add_argument("--jobs", type=int, default=1)
    ps.add_argument("--allow-extrapolation", action="store_true")
    ps.set_defaults(func=cmd_sweep)

    pi = sub.add_parser("interaction", help="factorial interaction sweep")
    pi.add_argument("--methods", default=None)
    pi.add_argument("--seeds", type=int, default=5)
    pi.add_argument("--scm", default="linear", choices=["linear", "tanh"])
    pi.add_argument("--out", default="results")
    pi.add_argument("--jobs", type=int, default=1)
    pi.add_argument("--grid-small", action="store_true",
                    help="2x2x2 corner grid for quick runs")
    pi.set_defaults(func=cmd_interaction)

    pr = sub.add_parser("report", help="plot-ready tables from stored results")
    pr.add_argument("--out", default="results",
                    help="directory holding sweep outputs")
    pr.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
