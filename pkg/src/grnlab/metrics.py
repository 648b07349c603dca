"""Scoring inferred networks against ground truth.

Two views: threshold-free ranking quality (area under the precision-recall
curve, undirected and directed) and a discrete error breakdown of the top-K
predictions into true / reversed / confounded / spurious / missed.
"""

import numpy as np
from dataclasses import dataclass

from .graph import ancestor_matrix


def average_precision(scores, labels):
    """Area under the precision-recall curve by the step construction.

    Tied scores form a single group: precision is evaluated once per group at
    the group's end, so the result is invariant to the ordering of ties.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1-d arrays of equal length")
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise ValueError("labels must contain at least one positive")
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = labels[order]
    group_ends = np.append(np.flatnonzero(np.diff(s) != 0), s.size - 1)
    cum_tp = np.cumsum(y)
    ap = 0.0
    prev_tp = 0
    for e in group_ends:
        tp = int(cum_tp[e])
        precision = tp / (e + 1)
        ap += (tp - prev_tp) / n_pos * precision
        prev_tp = tp
    return float(ap)


@dataclass
class PrCurvePoint:
    """One precision-recall evaluation point, taken at a tie-group boundary."""

    rank: int
    precision: float
    recall: float


def pr_curve(scores, labels):
    """Precision-recall points at every tie-group boundary, best score first."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1-d arrays of equal length")
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise ValueError("labels must contain at least one positive")
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = labels[order]
    group_ends = np.append(np.flatnonzero(np.diff(s) != 0), s.size - 1)
    cum_tp = np.cumsum(y)
    points = []
    for e in group_ends:
        tp = int(cum_tp[e])
        points.append(
            PrCurvePoint(rank=int(e + 1), precision=tp / (e + 1), recall=tp / n_pos)
        )
    return points


def _check_score_matrix(S, p):
    S = np.asarray(S, dtype=float)
    if S.shape != (p, p):
        raise ValueError(f"score matrix must be {p}x{p}, got {S.shape}")
    return S


def auprc_undirected(S, graph):
    """AUPRC over unordered gene pairs, direction ignored.

    Scores are symmetrized by the elementwise max so either orientation can
    claim an edge; labels are the symmetrized adjacency.
    """
    S = _check_score_matrix(S, graph.p)
    sym = np.maximum(S, S.T)
    lab = graph.adjacency | graph.adjacency.T
    iu = np.triu_indices(graph.p, k=1)
    return average_precision(sym[iu], lab[iu])


def auprc_directed(S, graph):
    """AUPRC over all ordered gene pairs (i, j), i != j."""
    S = _check_score_matrix(S, graph.p)
    mask = ~np.eye(graph.p, dtype=bool)
    return average_precision(S[mask], graph.adjacency[mask])


@dataclass
class ErrorCounts:
    true_edges: int
    reversed: int
    confounded: int
    spurious: int
    missed: int
    k: int
    selected: int

    def __post_init__(self):
        total = self.true_edges + self.reversed + self.confounded + self.spurious
        assert total == self.selected
        assert self.selected <= self.k
        assert self.missed == self.k - self.true_edges


def error_decomposition(S, graph, ancestors=None):
    """Classify the top-K directed predictions, K = number of true edges.

    Only strictly positive scores are eligible; boundary ties are resolved
    lexicographically by (i, j) so the selection is deterministic.  Each
    selected pair (i, j) gets the first matching label: true edge i -> j,
    reversed (true edge j -> i), confounded (no edge either way but a strict
    common ancestor exists), else spurious.  Missed counts unrecovered true
    edges, K - true.
    """
    S = _check_score_matrix(S, graph.p)
    A = graph.adjacency
    K = graph.n_edges
    if K == 0:
        raise ValueError("ground truth has no edges")
    if ancestors is None:
        ancestors = ancestor_matrix(graph)

    src, dst = np.nonzero(~np.eye(graph.p, dtype=bool))
    vals = S[src, dst]
    keep = vals > 0
    src, dst, vals = src[keep], dst[keep], vals[keep]
    order = np.lexsort((dst, src, -vals))
    take = order[: min(K, order.size)]

    n_true = n_rev = n_conf = n_spur = 0
    for idx in take:
        i, j = src[idx], dst[idx]
        if A[i, j]:
            n_true += 1
        elif A[j, i]:
            n_rev += 1
        elif (ancestors[:, i] & ancestors[:, j]).any():
            n_conf += 1
        else:
            n_spur += 1
    return ErrorCounts(
        true_edges=n_true,
        reversed=n_rev,
        confounded=n_conf,
        spurious=n_spur,
        missed=K - n_true,
        k=K,
        selected=int(take.size),
    )
