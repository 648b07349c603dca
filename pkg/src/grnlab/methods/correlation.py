"""Association baselines: absolute Pearson correlation and binned mutual
information."""

import numpy as np

from .base import ScoreMatrix


def pearson_scores(X):
    """Absolute Pearson correlation between all gene pairs.

    Constant genes get zero scores everywhere rather than NaN.
    """
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    ok = np.ptp(X, axis=0) > 0
    S = np.zeros((p, p))
    if ok.any():
        C = np.corrcoef(X[:, ok], rowvar=False)
        if C.ndim == 0:
            C = C.reshape(1, 1)
        S[np.ix_(ok, ok)] = np.abs(C)
    S = np.minimum(S, S.T)
    np.fill_diagonal(S, 0.0)
    return ScoreMatrix(S=S, symmetric=True, method="pearson")


def discretize(x, bins=6):
    """Equal-frequency binning into at most ``bins`` levels.

    Interior quantile cut points are deduplicated, so heavily tied data
    (e.g. mostly zeros after dropout) collapses into fewer effective bins.
    Returns integer codes and the number of levels.
    """
    qs = np.quantile(x, np.arange(1, bins) / bins)
    edges = np.unique(qs)
    return np.digitize(x, edges), len(edges) + 1


def mi_scores(X, bins=6):
    """Pairwise mutual information on equal-frequency discretized data.

    Entropies use natural log and plug-in frequencies; MI = H_i + H_j - H_ij,
    floored at zero against rounding.
    """
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    codes = np.empty((n, p), dtype=np.int64)
    nb = np.empty(p, dtype=np.int64)
    for j in range(p):
        codes[:, j], nb[j] = discretize(X[:, j], bins)
    H = np.empty(p)
    for j in range(p):
        cnt = np.bincount(codes[:, j], minlength=nb[j]) / n
        nz = cnt[cnt > 0]
        H[j] = -(nz * np.log(nz)).sum()
    S = np.zeros((p, p))
    for i in range(p):
        for j in range(i + 1, p):
            joint = np.bincount(codes[:, i] * nb[j] + codes[:, j],
                                minlength=nb[i] * nb[j]) / n
            nz = joint[joint > 0]
            H_ij = -(nz * np.log(nz)).sum()
            S[i, j] = S[j, i] = max(0.0, H[i] + H[j] - H_ij)
    return ScoreMatrix(S=S, symmetric=True, method="mi")
