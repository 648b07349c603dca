"""
Six inference methods on one clean dataset
==========================================

The laboratory ships six reference methods spanning four families:
marginal association (Pearson, mutual information), tree ensembles
(GENIE3), constraint-based causal discovery (PC), and score-based
structure search (GES, NOTEARS).  On clean linear data they separate
cleanly, and the directed scores expose which methods can orient edges
at all.
"""

import time

from grnlab.methods import METHOD_ORDER, run_method
from grnlab.metrics import auprc_directed, auprc_undirected
from grnlab.simulator import ScenarioConfig, generate_dataset

ds = generate_dataset(ScenarioConfig(), seed=0)
print(f"dataset: {ds.X.shape[0]} cells x {ds.X.shape[1]} genes, "
      f"{ds.graph.n_edges} true edges\n")

print(f"{'method':<8} {'undirected':>10} {'directed':>9} {'seconds':>8}")
for name in METHOD_ORDER:
    t0 = time.time()
    result = run_method(name, ds.X, seed=0)
    dt = time.time() - t0
    und = auprc_undirected(result.S, ds.graph)
    dire = auprc_directed(result.S, ds.graph)
    print(f"{name:<8} {und:>10.3f} {dire:>9.3f} {dt:>8.2f}")

print("\nPearson, MI and PC emit symmetric scores, so every true edge "
      "ties with its reversal and the directed score sits near half the "
      "undirected one.  GES and NOTEARS commit to orientations and keep "
      "both scores high.")
