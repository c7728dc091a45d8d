"""
Sum rate against network size
=============================

The outdoor preset with all six schemes. Pass a larger trial count or add
1024 to n_list to get closer to the full sweep (a few minutes).
"""

from itlinq import build_config, run_experiment

cfg = build_config({"n_list": [16, 64, 256], "trials": 20}, "iv-b")
res = run_experiment(cfg)

names = [s.name for s in cfg.all_schemes]
print("n".rjust(5), *(f"{x:>16s}" for x in names))
for n in cfg.n_list:
    print(f"{n:5d}", *(f"{res.value(n, x, 'sum_rate_mean'):16.1f}" for x in names))

# CSV is the output contract; this is what the CLI writes
print(res.to_csv().splitlines()[1])
