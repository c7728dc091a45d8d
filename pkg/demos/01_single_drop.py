"""
One drop, step by step
======================

Place a handful of links, compute their SNR/INR table and look at what
each scheduler switches on.
"""

import numpy as np

from itlinq import (
    Itu1411,
    LinkBudget,
    compute_gain_table,
    compute_snr_table,
    flashlinq_schedule,
    gen_square_topology,
    is_itis,
    itlinq_schedule,
    link_rates,
    noise_power_dbm,
    random_priority,
)

# 12 links in a 1 km square, lengths between 2 and 65 m
topo = gen_square_topology(12, 1000.0, 2.0, 65.0, seed=7)
print("link lengths (m):", np.round(topo.link_lengths(), 1))

# outdoor LoS channel at 2.4 GHz with 10 dB shadowing
rng = np.random.default_rng(7)
gains = compute_gain_table(topo, Itu1411(), rng)
budget = LinkBudget(20.0, noise_power_dbm(-184.0, 5e6, 7.0), 5e6)
table = compute_snr_table(gains, budget)
print("SNR (dB):", np.round(10 * np.log10(table.snr), 1))

# one random priority order shared by both schedulers.
# The 25 dB margin M lets ITLinQ admit sets that are not strict ITIS.
prio = random_priority(table.n, rng)
print("priority:", prio.perm)

for sched in (itlinq_schedule(table, prio), flashlinq_schedule(table, prio)):
    r = link_rates(sched, table)
    print(f"{sched.scheme:10s} on={sched.active_links.tolist()} "
          f"sum={r.sum_bits_s_hz:.1f} bits/s/Hz  ITIS={is_itis(sched.active_links, table)}")
