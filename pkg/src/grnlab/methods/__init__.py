"""Reference network-inference methods behind a uniform interface.

``run_method(name, X, seed)`` dispatches by name and always returns a
validated ScoreMatrix.  Only the forest method consumes the seed; the rest
are deterministic in the data.
"""

from .base import ScoreMatrix
from .correlation import pearson_scores, mi_scores, discretize
from .forest import genie3_scores
from .pc import pc_scores
from .ges import ges_scores, eqvar_order
from .notears import notears_scores

METHOD_ORDER = ["pearson", "mi", "genie3", "pc", "ges", "notears"]


def run_method(name, X, seed=0):
    if name == "pearson":
        sm = pearson_scores(X)
    elif name == "mi":
        sm = mi_scores(X)
    elif name == "genie3":
        sm = genie3_scores(X, seed=seed)
    elif name == "pc":
        sm = pc_scores(X)
    elif name == "ges":
        sm = ges_scores(X)
    elif name == "notears":
        sm = notears_scores(X)
    else:
        raise ValueError(f"unknown method {name!r}; valid: {', '.join(METHOD_ORDER)}")
    return sm.validate()


__all__ = [
    "ScoreMatrix",
    "METHOD_ORDER",
    "run_method",
    "pearson_scores",
    "mi_scores",
    "discretize",
    "genie3_scores",
    "pc_scores",
    "ges_scores",
    "eqvar_order",
    "notears_scores",
]
