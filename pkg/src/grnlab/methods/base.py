"""Common score-matrix container shared by all inference methods."""

import numpy as np
from dataclasses import dataclass


@dataclass
class ScoreMatrix:
    """A p x p matrix of nonnegative edge scores, S[i, j] scoring i -> j.

    ``symmetric`` marks methods that cannot orient edges; for those the
    matrix is exactly symmetric.  ``converged`` is only meaningful for
    iterative optimizers and stays True elsewhere.
    """

    S: np.ndarray
    symmetric: bool
    method: str
    converged: bool = True

    def validate(self):
        S = self.S
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ValueError("score matrix must be square")
        if not np.isfinite(S).all():
            raise ValueError("score matrix contains non-finite entries")
        if (S < 0).any():
            raise ValueError("score matrix contains negative entries")
        if np.diagonal(S).any():
            raise ValueError("score matrix diagonal must be zero")
        if self.symmetric and not (S == S.T).all():
            raise ValueError("matrix flagged symmetric is not exactly symmetric")
        return self
