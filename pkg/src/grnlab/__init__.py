"""grnlab: a diagnostic laboratory for gene-regulatory-network inference.

Simulates expression data from structural causal models with seven
independently controllable corruption dials, runs six reference inference
methods, and scores them with tie-aware AUPRC plus a five-way error
decomposition.  The harness and CLI orchestrate degradation sweeps and a
factorial interaction analysis.
"""

__version__ = "0.1.0"

from .graph import GroundTruthGraph, sample_dag, add_feedback, ancestor_matrix, spectral_radius
from .simulator import (
    ScenarioConfig,
    Dataset,
    generate_dataset,
    calibrate_dropout,
    apply_dropout,
    dump_dataset,
)
from .metrics import (
    average_precision,
    pr_curve,
    PrCurvePoint,
    auprc_undirected,
    auprc_directed,
    error_decomposition,
    ErrorCounts,
)
from .methods import ScoreMatrix, run_method, METHOD_ORDER
from .harness import (
    ExperimentSpec,
    ExperimentResult,
    SweepTable,
    InteractionSummary,
    run_experiment,
    run_single_dial_sweep,
    run_interaction_sweep,
    compute_delta_table,
    compute_interaction_summary,
    winner_map,
    aggregate,
    DIAL_GRIDS,
)
