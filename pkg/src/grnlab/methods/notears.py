"""Continuous structure learning via acyclicity-penalized least squares
(augmented Lagrangian on h(W) = tr exp(W o W) - p).

The weight matrix is split into positive and negative parts so the l1 term
is linear and L-BFGS-B box bounds keep both parts nonnegative (diagonal
pinned to zero).  Input is centered but not rescaled.  Small weights below
the edge threshold are zeroed before scores are taken as |W|.
"""

import numpy as np
import scipy.linalg as slin
import scipy.optimize as sopt

from .base import ScoreMatrix


def acyclicity(W):
    """h(W) = tr exp(W o W) - p and its gradient (e^{W o W})^T o 2W."""
    E = slin.expm(W * W)
    return np.trace(E) - W.shape[0], E.T * W * 2


def _unpack(w, d):
    return (w[: d * d] - w[d * d:]).reshape(d, d)


def objective(w, Xc, rho, alpha, lambda1):
    """Full augmented-Lagrangian objective and gradient in the doubled
    (positive part, negative part) parameterization."""
    n, d = Xc.shape
    W = _unpack(w, d)
    R = Xc - Xc @ W
    loss = 0.5 / n * (R ** 2).sum()
    G_loss = -1.0 / n * Xc.T @ R
    h, G_h = acyclicity(W)
    obj = loss + 0.5 * rho * h * h + alpha * h + lambda1 * w.sum()
    G = G_loss + (rho * h + alpha) * G_h
    return obj, np.concatenate((G + lambda1, -G + lambda1), axis=None)


def notears_scores(X, lambda1=0.05, w_threshold=0.1, max_iter=100,
                   h_tol=1e-8, rho_max=1e16):
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    Xc = X - X.mean(axis=0, keepdims=True)

    w_est = np.zeros(2 * d * d)
    rho, alpha, h = 1.0, 0.0, np.inf
    bounds = [(0, 0) if i == j else (0, None)
              for _ in range(2) for i in range(d) for j in range(d)]
    for _ in range(max_iter):
        w_new, h_new = None, None
        while rho < rho_max:
            sol = sopt.minimize(objective, w_est, args=(Xc, rho, alpha, lambda1),
                                method="L-BFGS-B", jac=True, bounds=bounds)
            w_new = sol.x
            h_new, _ = acyclicity(_unpack(w_new, d))
            if h_new > 0.25 * h:
                rho *= 10
            else:
                break
        w_est, h = w_new, h_new
        alpha += rho * h
        if h <= h_tol or rho >= rho_max:
            break
    W_est = _unpack(w_est, d)
    W_est[np.abs(W_est) < w_threshold] = 0.0
    S = np.abs(W_est)
    np.fill_diagonal(S, 0.0)
    return ScoreMatrix(S=S, symmetric=False, method="notears",
                       converged=bool(h <= 1e-6))
