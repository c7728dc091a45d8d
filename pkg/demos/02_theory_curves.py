"""
Guaranteed fraction of the capacity region
==========================================

Tabulate the asymptotic fraction lambda(n) in the three path-loss regimes
and compare with plain time sharing (1/n).
"""

from itlinq import build_config, run_experiment

cfg = build_config({"experiment": "theory_curves", "betas": [0.5, 1.0, 1.5, 2.0],
                    "n_list": [8, 64, 512, 4096]})
res = run_experiment(cfg)

# beta < 1 decays polynomially, beta = 1 like lnln(n)/ln(n), beta > 1 is flat
for n in cfg.n_list:
    cells = [f"{res.value(n, f'beta={b:g}/theory', 'lambda'):.4f}" for b in cfg.betas]
    print(n, *cells, f"tdma={1 / n:.4f}")
