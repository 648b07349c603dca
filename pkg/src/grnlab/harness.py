"""Experiment orchestration: single-dial sweeps, the factorial interaction
sweep, replicate aggregation, winner maps, and sub-additivity summaries.

Every experiment is fully determined by (scenario, method, seed); datasets
are regenerated from the seed on demand, so results are reproducible and the
work list can be executed in any order or in parallel.  Rows are emitted in
a canonical (level, method, seed) order so downstream files are byte-stable.
"""

import time
import numpy as np
from dataclasses import dataclass, replace
from concurrent.futures import ProcessPoolExecutor

from .simulator import ScenarioConfig, generate_dataset
from .methods import run_method, METHOD_ORDER
from .metrics import auprc_undirected, auprc_directed, error_decomposition

DIAL_GRIDS = {
    "dropout": [0.0, 0.2, 0.4, 0.6, 0.8],
    "confounders": [0, 2, 4, 8, 16],
    "mixing": [0.0, 0.1, 0.25, 0.4, 0.5],
    "feedback": [0.0, 0.1, 0.2, 0.3, 0.5],
    "density": [0.05, 0.1, 0.15, 0.2, 0.3],
    "sample_size": [200, 400, 800, 1600, 3200],
    "pseudotime": [0.0, 0.2, 0.5, 1.0, 1.5],
}

INTERACTION_GRID = {
    "dropout": [0.0, 0.3, 0.6, 0.8],
    "confounders": [0, 2, 8, 16],
    "density": [0.05, 0.1, 0.2, 0.3],
}

INTERACTION_GRID_SMALL = {
    "dropout": [0.0, 0.8],
    "confounders": [0, 16],
    "density": [0.05, 0.3],
}

RAW_COLUMNS = [
    "scm_kind", "pathology", "level", "method", "seed",
    "auprc_undirected", "auprc_directed",
    "true", "reversed", "confounded", "spurious", "missed",
    "k_edges", "selected", "runtime_s", "converged",
]


@dataclass
class ExperimentSpec:
    scenario: ScenarioConfig
    method: str
    seed: int


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    auprc_undirected: float
    auprc_directed: float
    errors: object
    runtime_seconds: float
    convergence_flag: bool


@dataclass
class SweepTable:
    rows: list

    def __len__(self):
        return len(self.rows)

    def to_dataframe(self):
        import pandas as pd

        return pd.DataFrame(self.rows)


@dataclass
class InteractionSummary:
    rows: list  # one dict per method


def default_seeds(r):
    """Replicate seeds are simply 0..r-1."""
    return list(range(r))


def run_experiment(spec):
    """Generate data, run one method, score it.  Timing wraps only the
    inference call, so runtimes compare method cost alone."""
    ds = generate_dataset(spec.scenario, spec.seed)
    t0 = time.perf_counter()
    sm = run_method(spec.method, ds.X, seed=spec.seed)
    runtime = max(time.perf_counter() - t0, 1e-9)
    und = auprc_undirected(sm.S, ds.graph)
    dr = auprc_directed(sm.S, ds.graph)
    errs = error_decomposition(sm.S, ds.graph)
    return ExperimentResult(
        spec=spec,
        auprc_undirected=und,
        auprc_directed=dr,
        errors=errs,
        runtime_seconds=runtime,
        convergence_flag=sm.converged,
    )


def _result_row(res, pathology, level_label, extra=None):
    e = res.errors
    row = {
        "scm_kind": res.spec.scenario.scm_kind,
        "pathology": pathology,
        "level": level_label,
        "method": res.spec.method,
        "seed": res.spec.seed,
        "auprc_undirected": res.auprc_undirected,
        "auprc_directed": res.auprc_directed,
        "true": e.true_edges,
        "reversed": e.reversed,
        "confounded": e.confounded,
        "spurious": e.spurious,
        "missed": e.missed,
        "k_edges": e.k,
        "selected": e.selected,
        "runtime_s": res.runtime_seconds,
        "converged": res.convergence_flag,
    }
    if extra:
        row.update(extra)
    return row


def _run_cell(args):
    """Run every method on one generated dataset (one scenario + seed)."""
    scenario, seed, methods, pathology, level_label, extra = args
    ds = generate_dataset(scenario, seed)
    rows = []
    for method in methods:
        t0 = time.perf_counter()
        sm = run_method(method, ds.X, seed=seed)
        runtime = max(time.perf_counter() - t0, 1e-9)
        e = error_decomposition(sm.S, ds.graph)
        res = ExperimentResult(
            spec=ExperimentSpec(scenario=scenario, method=method, seed=seed),
            auprc_undirected=auprc_undirected(sm.S, ds.graph),
            auprc_directed=auprc_directed(sm.S, ds.graph),
            errors=e,
            runtime_seconds=runtime,
            convergence_flag=sm.converged,
        )
        rows.append(_result_row(res, pathology, level_label, extra))
    return rows


def _execute(items, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_run_cell, items))
    return [_run_cell(it) for it in items]


def scenario_for(pathology, level, scm_kind="linear"):
    """Defaults with one dial set to ``level``."""
    base = ScenarioConfig(scm_kind=scm_kind)
    if pathology == "dropout":
        return replace(base, dropout=float(level))
    if pathology == "confounders":
        return replace(base, confounders=int(level))
    if pathology == "mixing":
        return replace(base, mixing=float(level))
    if pathology == "feedback":
        return replace(base, feedback=float(level))
    if pathology == "density":
        return replace(base, rho=float(level))
    if pathology == "sample_size":
        return replace(base, n=int(level))
    if pathology == "pseudotime":
        return replace(base, pseudotime=float(level))
    raise ValueError(
        f"unknown pathology {pathology!r}; valid: {', '.join(DIAL_GRIDS)}"
    )


def validate_levels(pathology, levels, allow_extrapolation=False):
    if pathology not in DIAL_GRIDS:
        raise ValueError(
            f"unknown pathology {pathology!r}; valid: {', '.join(DIAL_GRIDS)}"
        )
    if allow_extrapolation:
        return
    grid = DIAL_GRIDS[pathology]
    bad = [lv for lv in levels if not any(np.isclose(lv, g) for g in grid)]
    if bad:
        raise ValueError(
            f"levels {bad} outside the published {pathology} grid {grid}; "
            f"pass allow_extrapolation to override"
        )


def run_single_dial_sweep(pathology, levels=None, methods=None, seeds=None,
                          scm_kind="linear", jobs=1, allow_extrapolation=False):
    """Sweep one dial over its level grid, all else at benign defaults."""
    if levels is None:
        levels = DIAL_GRIDS.get(pathology)
        if levels is None:
            raise ValueError(
                f"unknown pathology {pathology!r}; valid: {', '.join(DIAL_GRIDS)}"
            )
    validate_levels(pathology, levels, allow_extrapolation)
    methods = list(METHOD_ORDER) if methods is None else list(methods)
    seeds = default_seeds(10) if seeds is None else list(seeds)
    items = [
        (scenario_for(pathology, lv, scm_kind), seed, methods, pathology, lv, None)
        for lv in levels
        for seed in seeds
    ]
    chunks = _execute(items, jobs)
    # canonical order: level, then method, then seed
    by_key = {}
    for rows in chunks:
        for row in rows:
            by_key[(row["level"], row["method"], row["seed"])] = row
    ordered = [
        by_key[(lv, m, s)] for lv in levels for m in methods for s in seeds
    ]
    return SweepTable(rows=ordered)


def run_all_dials(methods=None, seeds=None, scm_kind="linear", jobs=1):
    rows = []
    for pathology in DIAL_GRIDS:
        t = run_single_dial_sweep(pathology, methods=methods, seeds=seeds,
                                  scm_kind=scm_kind, jobs=jobs)
        rows.extend(t.rows)
    return SweepTable(rows=rows)


def run_interaction_sweep(grid=None, methods=None, seeds=None, jobs=1,
                          scm_kind="linear"):
    """Fully crossed dropout x confounders x density sweep."""
    grid = INTERACTION_GRID if grid is None else grid
    for axis in ("dropout", "confounders", "density"):
        if not grid.get(axis):
            raise ValueError(f"interaction grid axis {axis!r} is empty")
    methods = list(METHOD_ORDER) if methods is None else list(methods)
    seeds = default_seeds(5) if seeds is None else list(seeds)
    base = ScenarioConfig(scm_kind=scm_kind)
    cells = [
        (d, k, r)
        for d in grid["dropout"]
        for k in grid["confounders"]
        for r in grid["density"]
    ]
    items = []
    for d, k, r in cells:
        scen = replace(base, dropout=float(d), confounders=int(k), rho=float(r))
        label = f"{d}|{k}|{r}"
        extra = {"cell_dropout": d, "cell_confounders": k, "cell_density": r}
        for seed in seeds:
            items.append((scen, seed, methods, "interaction", label, extra))
    chunks = _execute(items, jobs)
    by_key = {}
    for rows in chunks:
        for row in rows:
            by_key[(row["level"], row["method"], row["seed"])] = row
    ordered = [
        by_key[(f"{d}|{k}|{r}", m, s)]
        for d, k, r in cells
        for m in methods
        for s in seeds
    ]
    return SweepTable(rows=ordered)


def aggregate(rows, group_keys, value_keys=("auprc_undirected", "auprc_directed")):
    """Mean and standard error per group.

    SEM uses the sample standard deviation over seed replicates; groups with
    a single replicate report SEM 0 and set the single-replicate flag.
    """
    if isinstance(rows, SweepTable):
        rows = rows.rows
    groups = {}
    for row in rows:
        key = tuple(row[k] for k in group_keys)
        groups.setdefault(key, []).append(row)
    out = []
    for key in sorted(groups, key=lambda k: tuple(str(x) for x in k)):
        members = groups[key]
        if not members:
            raise ValueError("empty aggregation group")
        rec = dict(zip(group_keys, key))
        rec["replicates"] = len(members)
        rec["single_replicate"] = len(members) == 1
        for vk in value_keys:
            vals = np.array([m[vk] for m in members], dtype=float)
            rec[f"{vk}_mean"] = float(vals.mean())
            if vals.size > 1:
                rec[f"{vk}_sem"] = float(vals.std(ddof=1) / np.sqrt(vals.size))
            else:
                rec[f"{vk}_sem"] = 0.0
        out.append(rec)
    return out


def _grid_index(pathology, level):
    grid = DIAL_GRIDS[pathology]
    for i, g in enumerate(grid):
        if np.isclose(level, g):
            return i
    return None


def compute_delta_table(sweep, metric="auprc_undirected"):
    """Per-(pathology, method) drop from the easiest to the hardest level.

    Easiest and hardest are the first and last entries of the dial's
    published grid; both must be present in the sweep.  Each pathology also
    flags its most robust (smallest |delta|) and most fragile method.
    """
    rows = sweep.rows if isinstance(sweep, SweepTable) else list(sweep)
    agg = aggregate(rows, ("scm_kind", "pathology", "level", "method"),
                    value_keys=(metric,))
    cells = {}
    for rec in agg:
        if rec["pathology"] == "interaction":
            raise ValueError("delta table applies to single-dial sweeps only")
        cells[(rec["scm_kind"], rec["pathology"], rec["level"], rec["method"])] = (
            rec[f"{metric}_mean"]
        )
    combos = sorted(
        {(sk, pa, m) for sk, pa, lv, m in cells},
        key=lambda t: (t[0], t[1], t[2]),
    )
    out = []
    for sk, pathology, method in combos:
        grid = DIAL_GRIDS[pathology]
        easiest, hardest = grid[0], grid[-1]
        lo = cells.get((sk, pathology, easiest, method))
        hi = cells.get((sk, pathology, hardest, method))
        if lo is None or hi is None:
            raise ValueError(
                f"{pathology} sweep must include its easiest ({easiest}) and "
                f"hardest ({hardest}) grid levels"
            )
        out.append({
            "scm_kind": sk,
            "pathology": pathology,
            "method": method,
            "easiest_level": easiest,
            "hardest_level": hardest,
            "mean_easiest": lo,
            "mean_hardest": hi,
            "delta": hi - lo,
            "most_robust": False,
            "most_fragile": False,
        })
    for sk, pathology in sorted({(r["scm_kind"], r["pathology"]) for r in out}):
        members = [r for r in out
                   if r["scm_kind"] == sk and r["pathology"] == pathology]
        robust = min(members, key=lambda r: (abs(r["delta"]), r["method"]))
        fragile = max(members, key=lambda r: (abs(r["delta"]), r["method"]))
        robust["most_robust"] = True
        fragile["most_fragile"] = True
    return out


def _interaction_cells(sweep, metric="auprc_undirected"):
    rows = sweep.rows if isinstance(sweep, SweepTable) else list(sweep)
    agg = aggregate(
        rows,
        ("cell_dropout", "cell_confounders", "cell_density", "method"),
        value_keys=(metric,),
    )
    return {
        (r["cell_dropout"], r["cell_confounders"], r["cell_density"], r["method"]):
            r[f"{metric}_mean"]
        for r in agg
    }


def winner_map(sweep, metric="auprc_undirected"):
    """Best method per (dropout, confounders, density) cell by mean AUPRC.

    Exact ties go to the lexicographically first method name and are flagged.
    """
    cells = _interaction_cells(sweep, metric)
    coords = sorted({(d, k, r) for d, k, r, m in cells})
    out = []
    for d, k, r in coords:
        scores = sorted(
            ((m, v) for (dd, kk, rr, m), v in cells.items()
             if (dd, kk, rr) == (d, k, r)),
            key=lambda t: t[0],
        )
        best_val = max(v for _, v in scores)
        winners = [m for m, v in scores if v == best_val]
        out.append({
            "dropout": d,
            "confounders": k,
            "density": r,
            "winner": winners[0],
            "auprc": best_val,
            "tie": len(winners) > 1,
        })
    return out


def compute_interaction_summary(sweep, metric="auprc_undirected"):
    """Sub-additivity analysis over the factorial grid.

    All deltas are positive-signed AUPRC drops from the cleanest corner;
    delta_add is exactly the sum of the three single-axis drops, so a
    negative interaction (= delta_joint - delta_add) means the combined
    pathologies hurt less than the sum of their parts.
    """
    cells = _interaction_cells(sweep, metric)
    ds = sorted({d for d, k, r, m in cells})
    ks = sorted({k for d, k, r, m in cells})
    rs = sorted({r for d, k, r, m in cells})
    methods = sorted({m for d, k, r, m in cells})
    d0, d1 = ds[0], ds[-1]
    k0, k1 = ks[0], ks[-1]
    r0, r1 = rs[0], rs[-1]
    rows = []
    for m in methods:
        needed = {
            "cleanest": (d0, k0, r0, m),
            "worst": (d1, k1, r1, m),
            "dropout-hardest": (d1, k0, r0, m),
            "confounders-hardest": (d0, k1, r0, m),
            "density-hardest": (d0, k0, r1, m),
        }
        missing = [name for name, key in needed.items() if key not in cells]
        if missing:
            raise ValueError(
                f"interaction grid for {m} is missing cells: {', '.join(missing)}"
            )
        auprc0 = cells[needed["cleanest"]]
        delta_joint = auprc0 - cells[needed["worst"]]
        delta_d = auprc0 - cells[needed["dropout-hardest"]]
        delta_k = auprc0 - cells[needed["confounders-hardest"]]
        delta_rho = auprc0 - cells[needed["density-hardest"]]
        delta_add = delta_d + delta_k + delta_rho
        rows.append({
            "method": m,
            "auprc0": auprc0,
            "delta_joint": delta_joint,
            "delta_d": delta_d,
            "delta_k": delta_k,
            "delta_rho": delta_rho,
            "delta_add": delta_add,
            "interaction": delta_joint - delta_add,
        })
    return InteractionSummary(rows=rows)
