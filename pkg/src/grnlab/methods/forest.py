"""Random-forest regression importances in the GENIE3 style.

Each gene in turn is the regression target; all other genes are candidate
regulators.  A small forest of exact best-split trees is grown on bootstrap
resamples, every feature is examined at every split, and each tree's
impurity-reduction importances are normalized to sum to one before
averaging.  The tree builder is compiled with numba; bootstrap resamples are
encoded as per-sample weights.
"""

import numpy as np
from numba import njit

from .base import ScoreMatrix


@njit(cache=True)
def _build_tree(xt, order, w, y, imp_out):
    """Grow one exact best-split regression tree, accumulating unnormalized
    importances (weighted SSE decrease / total weight) per feature."""
    n_feat, n = xt.shape
    total_w = 0.0
    for s in range(n):
        total_w += w[s]
    # active samples in per-feature sorted order
    m = 0
    for s in range(n):
        if w[s] > 0:
            m += 1
    idx = np.empty((n_feat, m), dtype=np.int32)
    for f in range(n_feat):
        k = 0
        for t in range(n):
            s = order[f, t]
            if w[s] > 0:
                idx[f, k] = s
                k += 1
    ws = 0.0
    ys = 0.0
    y2s = 0.0
    for s in range(n):
        if w[s] > 0:
            ws += w[s]
            ys += w[s] * y[s]
            y2s += w[s] * y[s] * y[s]

    max_nodes = 4 * m + 64
    st_lo = np.empty(max_nodes, dtype=np.int64)
    st_hi = np.empty(max_nodes, dtype=np.int64)
    st_ws = np.empty(max_nodes)
    st_ys = np.empty(max_nodes)
    st_y2 = np.empty(max_nodes)
    st_lo[0] = 0
    st_hi[0] = m
    st_ws[0] = ws
    st_ys[0] = ys
    st_y2[0] = y2s
    top = 1

    is_left = np.zeros(n, dtype=np.bool_)
    buf = np.empty(m, dtype=np.int32)

    while top > 0:
        top -= 1
        lo = st_lo[top]
        hi = st_hi[top]
        ws = st_ws[top]
        ys = st_ys[top]
        y2s = st_y2[top]
        sse_p = y2s - ys * ys / ws
        if ws < 2.0 or sse_p <= 1e-12:
            continue
        best_gain = 0.0
        best_f = -1
        best_thr = 0.0
        best_lw = 0.0
        best_ly = 0.0
        best_ly2 = 0.0
        for f in range(n_feat):
            lw = 0.0
            ly = 0.0
            ly2 = 0.0
            t = lo
            while t < hi - 1:
                s = idx[f, t]
                v = xt[f, s]
                lw += w[s]
                ly += w[s] * y[s]
                ly2 += w[s] * y[s] * y[s]
                # only valid thresholds sit between distinct values
                nxt = idx[f, t + 1]
                if xt[f, nxt] == v:
                    t += 1
                    continue
                rw = ws - lw
                sse_l = ly2 - ly * ly / lw
                sse_r = (y2s - ly2) - (ys - ly) * (ys - ly) / rw
                gain = sse_p - sse_l - sse_r
                # exact gain ties (identical induced partitions) break on the
                # threshold value, which does not depend on feature order
                if gain > best_gain or (
                    best_f >= 0 and gain == best_gain and v < best_thr
                ):
                    best_gain = gain
                    best_f = f
                    best_thr = v
                    best_lw = lw
                    best_ly = ly
                    best_ly2 = ly2
                t += 1
        if best_f < 0:
            continue
        imp_out[best_f] += best_gain / total_w
        for t in range(lo, hi):
            s = idx[best_f, t]
            is_left[s] = xt[best_f, s] <= best_thr
        nl = 0
        for t in range(lo, hi):
            if is_left[idx[best_f, t]]:
                nl += 1
        # stable partition keeps every feature row sorted within children
        for f in range(n_feat):
            a = 0
            b = nl
            for t in range(lo, hi):
                s = idx[f, t]
                if is_left[s]:
                    buf[a] = s
                    a += 1
                else:
                    buf[b] = s
                    b += 1
            for t in range(lo, hi):
                idx[f, t] = buf[t - lo]
        mid = lo + nl
        st_lo[top] = lo
        st_hi[top] = mid
        st_ws[top] = best_lw
        st_ys[top] = best_ly
        st_y2[top] = best_ly2
        top += 1
        st_lo[top] = mid
        st_hi[top] = hi
        st_ws[top] = ws - best_lw
        st_ys[top] = ys - best_ly
        st_y2[top] = y2s - best_ly2
        top += 1


@njit(cache=True)
def forest_importances(xt, order, y, boot_w):
    """Average per-tree normalized importances over bootstrap weight rows."""
    n_trees = boot_w.shape[0]
    n_feat = xt.shape[0]
    acc = np.zeros(n_feat)
    imp = np.zeros(n_feat)
    for t in range(n_trees):
        imp[:] = 0.0
        _build_tree(xt, order, boot_w[t], y, imp)
        tot = imp.sum()
        if tot > 0.0:
            acc += imp / tot
    return acc / n_trees


def genie3_scores(X, n_trees=50, seed=0, target_seeds=None):
    """Forest importance scores for every regulator -> target pair.

    Each target gets its own generator, seeded from (seed, target index) by
    default, so per-target results do not depend on how many other targets
    run.  ``target_seeds`` overrides the per-target seeding, which lets
    callers preserve streams under gene permutations.  A constant target is
    skipped and contributes only zero scores.
    """
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    Xt = np.ascontiguousarray(X.T)
    orders = np.ascontiguousarray(
        np.argsort(X, axis=0, kind="stable").T.astype(np.int64)
    )
    S = np.zeros((p, p))
    for j in range(p):
        if np.ptp(X[:, j]) == 0:
            continue
        if target_seeds is None:
            rng = np.random.default_rng([seed, j])
        else:
            rng = np.random.default_rng(target_seeds[j])
        boot = np.zeros((n_trees, n))
        for t in range(n_trees):
            boot[t] = np.bincount(rng.integers(0, n, n), minlength=n)
        feats = [i for i in range(p) if i != j]
        S[feats, j] = forest_importances(
            np.ascontiguousarray(Xt[feats]),
            np.ascontiguousarray(orders[feats]),
            X[:, j].copy(),
            boot,
        )
    return ScoreMatrix(S=S, symmetric=False, method="genie3")
