"""
How close is the equilibrium count to Poisson(1)?
=================================================

Indicators of "profile i is an equilibrium" are independent of each other
unless some player reads overlapping rows.  The exact dependence structure
gives two numbers b1 and b2, and 2(b1 + b2) bounds the total variation
distance between the count and a Poisson(1) variable.
"""

import math

import numpy as np

from nashphase.experiments import poisson_pmf, tv_distance, tv_sampling_error
from nashphase.games import sample_tables_batch
from nashphase.graphs import GnpParams, gen_complete, gen_gnp, gen_path
from nashphase.pne import count_pne_batch
from nashphase.stein import eval_R, eval_S, stein_bounds_exact

graphs = {
    "path(10)": gen_path(10),
    "G(16, 0.5)": gen_gnp(GnpParams(16, 0.5, seed=3)),
    "K_12": gen_complete(12),
}
trials = 10_000
print(f"{'graph':12s} {'b1':>8s} {'b2':>8s} {'bound':>8s} {'TV':>8s}")
for name, g in graphs.items():
    sb = stein_bounds_exact(g)
    z = count_pne_batch(g, sample_tables_batch(g, range(trials)))
    tv = tv_distance(np.bincount(z).tolist())
    print(f"{name:12s} {sb.b1:8.4f} {sb.b2:8.4f} {sb.tv_bound:8.4f} {tv:8.4f}")
print(f"(sampling noise in TV at {trials} games is about {tv_sampling_error(trials):.4f})")

# %%
# Dense graphs make the count nearly Poisson; long paths do not.

z = count_pne_batch(graphs["K_12"], sample_tables_batch(graphs["K_12"], range(trials)))
hist = np.bincount(z, minlength=5)[:5] / trials
print("K_12 empirical:", np.round(hist, 3).tolist())
print("Poisson(1):    ", [round(poisson_pmf(k, 1), 3) for k in range(5)])

# %%
# Averaged over G(n, p), the envelopes R and S bound E[b1] and E[b2].

n = 14
p = 3 * math.log(n) / n
bs = [stein_bounds_exact(gen_gnp(GnpParams(n, p, s))) for s in range(100)]
print(f"n={n} p={p:.3f}: mean b1 {np.mean([b.b1 for b in bs]):.4f} <= R {eval_R(n, p):.4f}, "
      f"mean b2 {np.mean([b.b2 for b in bs]):.4f} <= S {eval_S(n, p):.4f}")
