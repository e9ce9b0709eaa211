"""
The three connectivity regimes, end to end
==========================================

Sweeps P(PNE) over G(n, p) in the dense, medium and sparse regimes, writes
one CSV per regime plus a gnuplot script for each.  Re-running with the same
seed reproduces the CSV byte for byte.

    python demos/04_three_regimes.py --trials 2000 --out results/
"""

import argparse
from pathlib import Path

from nashphase.experiments import (SweepConfig, gnuplot_script, high_preset, medium_preset,
                                   run_sweep)
from nashphase.stein import medium_regime_bound, predict_low_connectivity

ap = argparse.ArgumentParser()
ap.add_argument("--trials", type=int, default=2000)
ap.add_argument("--seed", type=int, default=2026)
ap.add_argument("--out", default="regimes")
opts = ap.parse_args()
out = Path(opts.out)
out.mkdir(parents=True, exist_ok=True)

# Dense: p = (2 + eps) log n / n for a few n.  Giant components, so the
# full search runs on the whole graph; keep n modest.
dense = SweepConfig(family="gnp", n=16, p_grid=high_preset(16, 1.0) + [0.6, 0.9],
                    trials=opts.trials, master_seed=opts.seed, count_mode="exists")

# Medium: p = beta / n.  Below beta = 1 components stay small; the last point
# sits at beta = 1, where some components outgrow the cap and show up as skips.
medium = SweepConfig(family="gnp", n=200, p_grid=[b / 200 for b in (0.25, 0.5, 0.75)] + medium_preset(200, 1.0),
                     trials=opts.trials, master_seed=opts.seed, count_mode="exists")

# Sparse: p = c / n^2, a handful of edges.
sparse = SweepConfig(family="gnp", n=50, p_grid=[c / 2500 for c in (2, 4, 8, 16, 32)],
                     trials=opts.trials, master_seed=opts.seed, count_mode="exists")

for name, cfg in [("dense", dense), ("medium", medium), ("sparse", sparse)]:
    res = run_sweep(cfg)
    csv_path = out / f"{name}.csv"
    csv_path.write_text(res.to_csv())
    (out / f"{name}.gp").write_text(gnuplot_script(csv_path.name, f"P(PNE), {name} regime, n={cfg.n}"))
    print(f"--- {name} (n={cfg.n}, {res.wall_time:.1f}s)")
    for pt in res.points:
        line = f"p={pt.p:.5f}  P(PNE)={pt.p_pne:.4f}  [{pt.wilson_lo:.4f}, {pt.wilson_hi:.4f}]  skips={pt.skips}"
        if name == "sparse":
            line += f"  prediction {predict_low_connectivity(cfg.n, pt.p * cfg.n**2):.4f}"
        if name == "medium":
            line += f"  proof bound {medium_regime_bound(cfg.n, pt.p):.4f}"
        print(line)

print(f"\nwrote CSV and gnuplot scripts to {out}/ (run: cd {out} && gnuplot -p dense.gp)")
