"""Synthetic expression data from structural causal models.

A scenario bundles the generative knobs: graph density, noise scale, and the
seven pathology dials (dropout, hidden confounders, population mixing,
feedback, density itself, sample size, pseudotime drift).  Data generation is
a fixed pipeline: sample graph, add feedback edges, build noise, inject
confounders, simulate the mechanism (with mixture or pseudotime variants),
then apply dropout last.  All randomness flows from one per-dataset seed.
"""

import numpy as np
from dataclasses import dataclass, replace

from .graph import sample_dag, add_feedback


@dataclass
class ScenarioConfig:
    p: int = 25
    n: int = 800
    rho: float = 0.1
    sigma: float = 1.0
    scm_kind: str = "linear"
    dropout: float = 0.0
    confounders: int = 0
    mixing: float = 0.0
    feedback: float = 0.0
    pseudotime: float = 0.0
    confounder_load_prob: float = 0.3
    pseudotime_chunks: int = 10

    def validate(self):
        if self.p < 1 or self.n < 1:
            raise ValueError("p and n must be positive")
        if self.scm_kind not in ("linear", "tanh"):
            raise ValueError(f"unknown scm_kind {self.scm_kind!r}")
        if not (0.0 <= self.dropout < 1.0):
            raise ValueError("dropout must lie in [0, 1)")
        if self.confounders < 0:
            raise ValueError("confounders must be >= 0")
        for name in ("mixing", "feedback"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1]")
        if not (0.0 <= self.pseudotime <= 2.0):
            raise ValueError("pseudotime must lie in [0, 2]")
        if self.mixing > 0 and self.pseudotime > 0:
            raise ValueError("mixing and pseudotime dials cannot be combined")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass
class Dataset:
    X: np.ndarray
    graph: object
    scenario: ScenarioConfig
    seed: int
    provenance: np.ndarray = None


def build_noise(n, p, sigma, rng):
    return rng.normal(0.0, sigma, size=(n, p))


def add_confounders(eps, k, rng, load_prob=0.3):
    """Add ``k`` hidden confounders to a noise matrix.

    Loading matrix L is p x k with standard normal entries kept with
    probability ``load_prob`` (others zeroed), so each confounder hits a
    sparse random subset of genes.  Every cell row gets its own latent draw
    z ~ N(0, I_k) and receives L z on top of its noise.
    """
    n, p = eps.shape
    L = rng.normal(size=(p, k)) * (rng.random(size=(p, k)) < load_prob)
    Z = rng.normal(size=(n, k))
    return eps + Z @ L.T, L


def simulate_linear(W, eps):
    """Solve X (I - W) = eps for the linear mechanism (works cyclic too)."""
    p = W.shape[0]
    M = np.eye(p) - W
    return np.linalg.solve(M.T, eps.T).T


def simulate_tanh(W, eps, topo_order=None, cyclic=False, tol=1e-8, max_iter=1000):
    """Saturating mechanism X_j = tanh(sum_i W_ij X_i) + eps_j.

    Acyclic graphs are solved exactly by substitution along the topological
    order.  Cyclic graphs run fixed-point iteration from zero until the sup
    norm update falls below ``tol``.
    """
    n, p = eps.shape
    if not cyclic:
        order = np.arange(p) if topo_order is None else topo_order
        X = np.zeros((n, p))
        for j in order:
            X[:, j] = np.tanh(X @ W[:, j]) + eps[:, j]
        return X
    X = np.zeros((n, p))
    for _ in range(max_iter):
        X_new = np.tanh(X @ W) + eps
        delta = np.max(np.abs(X_new - X))
        X = X_new
        if delta <= tol:
            return X
    raise RuntimeError(f"fixed point did not converge within {max_iter} iterations")


def _simulate(W, eps, scm_kind, topo_order=None, cyclic=False):
    if scm_kind == "linear":
        return simulate_linear(W, eps)
    return simulate_tanh(W, eps, topo_order=topo_order, cyclic=cyclic)


def calibrate_dropout(X, delta, tol=0.01, x_min=None):
    """Find the lambda whose expected dropout rate matches ``delta``.

    An entry x drops with probability exp(-lambda * (x - x_min)), so the
    expected overall rate is the mean of that expression; it decreases
    monotonically in lambda from 1 toward the fraction of entries sitting
    exactly at the minimum.  Bisection stops once the achieved rate is within
    ``tol`` / 10 of the target, comfortably inside the advertised +/- ``tol``.
    """
    if x_min is None:
        x_min = float(X.min())
    D = X - x_min
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    floor = float((D == 0).mean())
    if delta <= floor:
        raise ValueError(
            f"target rate {delta} unachievable: {floor:.4f} of entries sit at the "
            f"minimum and always drop; feasible range is ({floor:.4f}, 1)"
        )

    def rate(lam):
        return float(np.exp(-lam * D).mean())

    lo, hi = 0.0, 1.0
    while rate(hi) > delta:
        hi *= 2.0
        if hi > 1e12:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r = rate(mid)
        if abs(r - delta) <= tol * 0.1:
            return mid
        if r > delta:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    if abs(rate(lam) - delta) > tol:
        raise RuntimeError(f"dropout calibration failed to reach {delta} within {tol}")
    return lam


def apply_dropout(X, lam, rng=None, u=None, x_min=None):
    """Zero entries with probability exp(-lam * (x - x_min)).

    Passing a fixed uniform matrix ``u`` couples masks across lambda values:
    the dropped set can only shrink as lambda grows.
    """
    if x_min is None:
        x_min = float(X.min())
    if u is None:
        u = rng.random(X.shape)
    Xd = X.copy()
    Xd[u < np.exp(-lam * (X - x_min))] = 0.0
    return Xd


def generate_dataset(scenario, seed, debug=False):
    """Run the full generation pipeline for one scenario and seed.

    Returns a Dataset whose graph always carries the acyclic ground truth
    used for scoring, regardless of feedback or mixing.  With ``debug`` the
    mixture branch also records which mechanism produced each row.
    """
    scenario.validate()
    rng = np.random.default_rng(seed)
    g = sample_dag(scenario.p, scenario.rho, rng)
    if scenario.feedback > 0:
        g = add_feedback(g, scenario.feedback, rng)
    eps = build_noise(scenario.n, scenario.p, scenario.sigma, rng)
    if scenario.confounders > 0:
        eps, _ = add_confounders(
            eps, scenario.confounders, rng, load_prob=scenario.confounder_load_prob
        )

    provenance = None
    if scenario.mixing > 0:
        # second mechanism over the same genes; truth stays the first graph
        g2 = sample_dag(scenario.p, scenario.rho, rng)
        n_b = int(np.rint(scenario.mixing * scenario.n))
        n_a = scenario.n - n_b
        X_a = _simulate(g.sim_weights, eps[:n_a], scenario.scm_kind,
                        g.topo_order, g.is_cyclic)
        X_b = _simulate(g2.sim_weights, eps[n_a:], scenario.scm_kind,
                        g2.topo_order, g2.is_cyclic)
        X = np.vstack([X_a, X_b])
        perm = rng.permutation(scenario.n)
        X = X[perm]
        if debug:
            provenance = np.concatenate(
                [np.zeros(n_a, dtype=int), np.ones(n_b, dtype=int)]
            )[perm]
    elif scenario.pseudotime > 0:
        chunks = np.array_split(np.arange(scenario.n), scenario.pseudotime_chunks)
        X = np.empty((scenario.n, scenario.p))
        nc = scenario.pseudotime_chunks
        for c, idx in enumerate(chunks):
            scale = 1.0 + scenario.pseudotime * ((c + 0.5) / nc - 0.5)
            X[idx] = _simulate(g.sim_weights * scale, eps[idx], scenario.scm_kind,
                               g.topo_order, g.is_cyclic)
    else:
        X = _simulate(g.sim_weights, eps, scenario.scm_kind, g.topo_order, g.is_cyclic)

    if scenario.dropout > 0:
        lam = calibrate_dropout(X, scenario.dropout)
        X = apply_dropout(X, lam, rng=rng)

    return Dataset(X=X, graph=g, scenario=scenario, seed=seed, provenance=provenance)


def dump_dataset(dataset, path):
    """Write a dataset as a plain text table plus a sidecar edge list.

    The table has one header row of gene names and one row per cell; the
    sidecar ``<path>.edges.csv`` lists the acyclic truth as ``i,j,weight``.
    """
    X = dataset.X
    p = X.shape[1]
    header = "\t".join(f"gene_{j}" for j in range(p))
    lines = [header]
    for row in X:
        lines.append("\t".join(f"{v:.6f}" for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    W = dataset.graph.weights
    src, dst = np.nonzero(dataset.graph.adjacency)
    with open(f"{path}.edges.csv", "w") as fh:
        fh.write("i,j,weight\n")
        for i, j in zip(src, dst):
            fh.write(f"{i},{j},{W[i, j]:.6f}\n")
