"""
One simulator, seven independent corruptions
============================================

Every dataset in this laboratory starts from the same recipe: sample a
weighted DAG, push Gaussian noise through it, and then optionally turn
one or more "dials" that each mimic a real single-cell artifact.  This
script generates one dataset per dial and prints what changed.
"""

import numpy as np

from grnlab.graph import spectral_radius
from grnlab.simulator import ScenarioConfig, generate_dataset

# the clean reference: 25 genes, 800 cells, expected density 0.1
clean = generate_dataset(ScenarioConfig(), seed=0)
print(f"clean: {clean.X.shape[0]} cells x {clean.X.shape[1]} genes, "
      f"{clean.graph.n_edges} true edges, "
      f"zero fraction {np.mean(clean.X == 0):.3f}")

# dropout: expression-dependent zeroing, calibrated to a target fraction
ds = generate_dataset(ScenarioConfig(dropout=0.8), seed=0)
print(f"dropout 0.8: zero fraction {np.mean(ds.X == 0):.3f} "
      "(low values vanish first)")

# confounders: unobserved factors that correlate otherwise unrelated genes
ds = generate_dataset(ScenarioConfig(confounders=16), seed=0)
extra = ds.X.var() - clean.X.var()
print(f"confounders 16: per-entry variance grows by {extra:.2f} "
      "from shared latent noise")

# mixing: a fraction of cells obeys a second, unrelated network
ds = generate_dataset(ScenarioConfig(mixing=0.4), seed=0, debug=True)
n_b = int((ds.provenance == 1).sum())
print(f"mixing 0.4: {ds.X.shape[0] - n_b} cells from graph A, "
      f"{n_b} impostors from graph B; only graph A is scored")

# feedback: cyclic back-edges that break the acyclicity assumption
ds = generate_dataset(ScenarioConfig(feedback=0.5), seed=0)
r = spectral_radius(ds.graph.sim_weights)
print(f"feedback 0.5: simulated system is cyclic (spectral radius "
      f"{r:.3f}), scored against the acyclic base graph")

# density: more true edges per gene at the same sample size
ds = generate_dataset(ScenarioConfig(rho=0.3), seed=0)
print(f"density 0.3: {ds.graph.n_edges} true edges "
      f"vs {clean.graph.n_edges} in the clean graph")

# sample size: fewer cells, same structure
ds = generate_dataset(ScenarioConfig(n=200), seed=0)
print(f"sample size 200: {ds.X.shape[0]} cells")

# pseudotime drift: edge weights scale along the cell ordering
ds = generate_dataset(ScenarioConfig(pseudotime=1.5), seed=0)
first, last = ds.X[:80], ds.X[-80:]
print(f"pseudotime 1.5: edge strength ramps from x0.325 to x1.675 "
      f"along the trajectory; early-cell variance {first.var():.2f}, "
      f"late-cell variance {last.var():.2f}")
