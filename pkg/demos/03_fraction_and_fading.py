"""
Measured fraction with and without fading
=========================================

Disk drops with pure path loss. For each drop the greedy ITIS cover gives
kappa, so 1/kappa is the fraction achieved. The same drop is then redrawn
with Rayleigh fades on every channel.
"""

from itlinq import build_config, run_experiment

cfg = build_config({"experiment": "fading_fraction", "n_list": [16, 64, 256],
                    "betas": [0.5, 2.0], "trials": 30}, "iv-a")
res = run_experiment(cfg)

for r in res.rows:
    if r.statistic in ("inv_kappa_mean", "lambda") and r.scheme != "tdma":
        print(f"n={r.n:4d} {r.scheme:32s} {r.statistic:15s} {r.value:.4f} +/- {r.stderr:.4f}")

# and the gap to the fraction, log2(3n)/kappa
gap = run_experiment(cfg.model_copy(update={"experiment": "gap_vs_n"}))
for r in gap.rows:
    print(f"gap n={r.n:4d} {r.scheme:22s} {r.value:.3f} bits")
