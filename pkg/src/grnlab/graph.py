"""Ground-truth graph sampling: random DAGs, feedback edges, reachability."""

import numpy as np
from dataclasses import dataclass, field


@dataclass
class GroundTruthGraph:
    """A sampled regulatory graph.

    ``adjacency`` and ``weights`` always describe the acyclic base graph and
    are the reference against which inference is scored.  ``sim_weights`` is
    the matrix actually fed to the data-generating process; it differs from
    ``weights`` only when feedback edges have been added (``is_cyclic``).
    Convention: entry (i, j) is the edge i -> j, so column j collects the
    parents of gene j.
    """

    p: int
    adjacency: np.ndarray
    weights: np.ndarray
    topo_order: np.ndarray
    sim_weights: np.ndarray = None
    is_cyclic: bool = False

    def __post_init__(self):
        if self.sim_weights is None:
            self.sim_weights = self.weights

    @property
    def n_edges(self):
        return int(self.adjacency.sum())


def sample_dag(p, rho, rng):
    """Sample a weighted DAG over ``p`` genes with expected density ``rho``.

    Genes are created in a fixed order 0..p-1 and edges only point from
    earlier to later genes, so the identity order is already topological.
    Gene j draws Binomial(j, rho) parents from its predecessors without
    replacement, with selection weight proportional to (i+1)^(-1) so early
    (hub-like) genes are favoured.  Weights get a uniform random sign and a
    magnitude drawn from U(0.5, 1.0).
    """
    if not (0.0 <= rho <= 1.0):
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    A = np.zeros((p, p), dtype=bool)
    W = np.zeros((p, p))
    for j in range(1, p):
        m = rng.binomial(j, rho)
        if m == 0:
            continue
        base = 1.0 / (np.arange(j) + 1.0)
        avail = np.ones(j, dtype=bool)
        for _ in range(m):
            w = base * avail
            w /= w.sum()
            i = rng.choice(j, p=w)
            avail[i] = False
            A[i, j] = True
        parents = np.flatnonzero(A[:, j])
        signs = np.where(rng.random(parents.size) < 0.5, -1.0, 1.0)
        W[parents, j] = signs * rng.uniform(0.5, 1.0, size=parents.size)
    return GroundTruthGraph(
        p=p,
        adjacency=A,
        weights=W,
        topo_order=np.arange(p),
        sim_weights=W,
        is_cyclic=False,
    )


def spectral_radius(W):
    """Largest eigenvalue modulus of a weight matrix."""
    W = np.asarray(W, dtype=float)
    if not np.isfinite(W).all():
        raise ValueError("weight matrix contains non-finite entries")
    return float(np.max(np.abs(np.linalg.eigvals(W))))


def add_feedback(graph, phi, rng):
    """Add reversed feedback edges to a copy of ``graph``.

    Each existing edge i -> j independently spawns a back-edge j -> i with
    probability ``phi``, a fresh uniform sign, and magnitude from U(0.1, 0.3).
    If the resulting spectral radius is >= 0.9 every simulation weight is
    rescaled by 0.85 / radius so the linear system stays stable.  The
    returned graph keeps the original acyclic adjacency and weights for
    evaluation; only ``sim_weights`` becomes cyclic.
    """
    if not (0.0 <= phi <= 1.0):
        raise ValueError(f"phi must lie in [0, 1], got {phi}")
    W_sim = graph.weights.copy()
    added = False
    src, dst = np.nonzero(graph.adjacency)
    for i, j in zip(src, dst):
        if rng.random() < phi:
            sign = -1.0 if rng.random() < 0.5 else 1.0
            W_sim[j, i] = sign * rng.uniform(0.1, 0.3)
            added = True
    if added:
        r = spectral_radius(W_sim)
        if r >= 0.9:
            W_sim *= 0.85 / r
    return GroundTruthGraph(
        p=graph.p,
        adjacency=graph.adjacency.copy(),
        weights=graph.weights.copy(),
        topo_order=graph.topo_order.copy(),
        sim_weights=W_sim,
        is_cyclic=added,
    )


def ancestor_matrix(graph):
    """Boolean matrix R with R[i, j] true iff i is a strict ancestor of j.

    Computed on the acyclic evaluation graph by accumulating powers of the
    adjacency matrix; paths of length >= 1 count, so the diagonal is false.
    """
    A = graph.adjacency.astype(bool)
    reach = A.copy()
    step = A.copy()
    for _ in range(graph.p - 1):
        step = step @ A
        new = reach | step
        if (new == reach).all():
            break
        reach = new
    np.fill_diagonal(reach, False)
    return reach
