"""Constraint-based skeleton recovery with Fisher-z partial correlation tests.

A stripped-down PC skeleton phase: starting from the complete undirected
graph, conditioning sets of size 0, 1, 2 are tested in order and an edge is
removed as soon as any test fails to reject independence.  Neighbor sets are
frozen at the start of each level, so removals within a level do not affect
which conditioning sets are examined (the order-independent convention).
Surviving edges are scored by absolute marginal correlation.
"""

import math
import numpy as np
from itertools import combinations

from .base import ScoreMatrix


def _correlation_matrix(X):
    n, p = X.shape
    ok = np.ptp(X, axis=0) > 0
    C = np.zeros((p, p))
    if ok.any():
        sub = np.corrcoef(X[:, ok], rowvar=False)
        if sub.ndim == 0:
            sub = sub.reshape(1, 1)
        C[np.ix_(ok, ok)] = sub
    np.fill_diagonal(C, 1.0)
    return C


def pc_scores(X, alpha=0.05, max_cond=2):
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    C = _correlation_matrix(X)
    adj = np.ones((p, p), dtype=bool)
    np.fill_diagonal(adj, False)
    clamp = 1 - 1e-7

    def independent(i, j, cond):
        ell = len(cond)
        if n - ell - 3 <= 0:
            return True
        if ell == 0:
            r = C[i, j]
        else:
            idx = [i, j] + list(cond)
            sub = C[np.ix_(idx, idx)]
            try:
                P = np.linalg.inv(sub)
            except np.linalg.LinAlgError:
                P = np.linalg.pinv(sub)
            d = P[0, 0] * P[1, 1]
            r = -P[0, 1] / math.sqrt(d) if d > 0 else 0.0
        r = max(-clamp, min(clamp, r))
        z = 0.5 * math.log((1 + r) / (1 - r)) * math.sqrt(n - ell - 3)
        return math.erfc(abs(z) / math.sqrt(2.0)) > alpha

    for ell in range(max_cond + 1):
        snapshot = adj.copy()
        for i in range(p):
            for j in range(i + 1, p):
                if not adj[i, j]:
                    continue
                removed = False
                for base in (i,) if ell == 0 else (i, j):
                    other = j if base == i else i
                    nbrs = [k for k in range(p) if snapshot[base, k] and k != other]
                    if len(nbrs) < ell:
                        continue
                    for cond in combinations(nbrs, ell):
                        if independent(i, j, cond):
                            adj[i, j] = adj[j, i] = False
                            removed = True
                            break
                    if removed:
                        break
    S = np.where(adj, np.abs(C), 0.0)
    S = np.minimum(S, S.T)
    np.fill_diagonal(S, 0.0)
    return ScoreMatrix(S=S, symmetric=True, method="pc")
