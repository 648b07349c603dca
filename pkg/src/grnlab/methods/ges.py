"""Greedy score-based search over a variance-derived causal order.

Stage one orders the genes by iteratively picking the gene whose variance,
after conditioning on the genes already placed, is smallest.  Under equal
noise variances this conditional-variance recursion places causes before
their effects, which is exactly what a forward search needs.  Stage two runs
a greedy forward parent search per gene: only earlier genes in the order are
candidates, each addition must improve a BIC-style score, and parents are
capped at three per gene.  The score for an accepted edge is its BIC gain at
inclusion, so later (more marginal) additions rank below earlier ones.
"""

import math
import numpy as np

from .base import ScoreMatrix


def eqvar_order(X):
    """Order genes by ascending conditional variance given the placed set.

    Conditional variances come from Schur complements of the sample
    covariance; a pseudoinverse keeps the recursion defined when columns are
    degenerate (e.g. all-zero genes after heavy dropout).  Ties go to the
    smallest gene index.
    """
    X = np.asarray(X, dtype=float)
    p = X.shape[1]
    C = np.cov(X, rowvar=False)
    if p == 1:
        return np.zeros(1, dtype=np.int64)
    order = []
    remaining = list(range(p))
    while remaining:
        if order:
            P = np.linalg.pinv(C[np.ix_(order, order)])
        best_j, best_v = None, np.inf
        for j in remaining:
            if order:
                c_sj = C[order, j]
                cv = C[j, j] - c_sj @ P @ c_sj
            else:
                cv = C[j, j]
            cv = max(cv, 0.0)
            if cv < best_v - 1e-15:
                best_v, best_j = cv, j
        order.append(best_j)
        remaining.remove(best_j)
    return np.asarray(order, dtype=np.int64)


def ges_scores(X, max_parents=3):
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    order = eqvar_order(X)
    rank = np.empty(p, dtype=np.int64)
    rank[order] = np.arange(p)
    Xc = X - X.mean(axis=0)
    S = np.zeros((p, p))
    logn = math.log(n)
    for j in range(p):
        cands = [i for i in range(p) if rank[i] < rank[j]]
        y = Xc[:, j]
        rss = float(y @ y)
        if not cands or rss <= 1e-12:
            continue
        parents = []
        while len(parents) < max_parents:
            best_gain, best_i, best_rss = 0.0, -1, rss
            for i in cands:
                if i in parents:
                    continue
                A = Xc[:, parents + [i]]
                coef, *_ = np.linalg.lstsq(A, y, rcond=None)
                r = y - A @ coef
                new_rss = float(r @ r)
                if new_rss <= 1e-12:
                    gain = np.inf if rss > 1e-12 else 0.0
                else:
                    gain = n * math.log(rss / new_rss) - logn
                if gain > best_gain:
                    best_gain, best_i, best_rss = gain, i, new_rss
            if best_i < 0:
                break
            parents.append(best_i)
            # exact fits get a large finite score so ranking stays usable
            S[best_i, j] = best_gain if np.isfinite(best_gain) else 10.0 * n
            rss = best_rss
    return ScoreMatrix(S=S, symmetric=False, method="ges")
