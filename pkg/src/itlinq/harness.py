"""Seeded Monte Carlo experiments.

Each trial is one independent drop: topology, shadowing/fading and priority
orders are all redrawn from substreams addressed by
``(master_seed, n, trial, stream)``. Results therefore do not depend on the
number of workers or the order in which trials finish.
"""
from __future__ import annotations

import csv
import io
import json
import math
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple

import numpy as np

from . import seeding
from .channel import SnrTable, compute_gain_table, compute_snr_table
from .config import ExperimentConfig, SchemeConfig, TopologyConfig
from .itis import (
    build_conflict_graph,
    exact_itis_cover,
    gamma_constant,
    greedy_coloring,
    greedy_itis_cover,
    is_itis,
    theoretical_fraction,
    threshold_distance,
)
from .rates import EmpiricalCdf, empirical_cdf, link_rates, rate_rows, time_sharing_rate
from .scheduling import (
    all_on_schedule,
    fair_itlinq_schedule,
    flashlinq_schedule,
    itlinq_schedule,
    random_priority,
)
from .topology import (
    LinkTopology,
    gen_closest_source_topology,
    gen_disk_topology,
    gen_square_topology,
)

CSV_COLUMNS = ("experiment", "n", "scheme", "statistic", "value", "stderr")
CDF_LEVELS = tuple(round(q, 2) for q in np.arange(0.05, 1.0, 0.05))


class Row(NamedTuple):
    experiment: str
    n: int
    scheme: str
    statistic: str
    value: float
    stderr: float


@dataclass
class ExperimentResult:
    experiment: str
    rows: list[Row]
    cdfs: dict[tuple[int, str, str], EmpiricalCdf] = field(default_factory=dict)
    samples: dict[tuple[int, str, str], np.ndarray] = field(default_factory=dict)
    link_rows: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.experiment, r.n, r.scheme, r.statistic))

    def value(self, n: int, scheme: str, statistic: str) -> float:
        return self.row(n, scheme, statistic).value

    def row(self, n: int, scheme: str, statistic: str) -> Row:
        for r in self.rows:
            if (r.n, r.scheme, r.statistic) == (n, scheme, statistic):
                return r
        raise KeyError((n, scheme, statistic))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.experiment, r.n, r.scheme, r.statistic, repr(float(r.value)), repr(float(r.stderr))])
        return buf.getvalue()

    def summary(self, cfg: ExperimentConfig) -> dict[str, Any]:
        return {
            "config_hash": cfg.config_hash(),
            "git_rev": git_revision(),
            "config": json.loads(cfg.canonical_json()),
            "rows": [r._asdict() for r in self.rows],
        }


def git_revision() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"], capture_output=True, text=True, timeout=5
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 else "unknown"


def mean_stderr(x) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    if x.size == 1:
        return float(x[0]), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def _map(fn: Callable, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


# ---------------------------------------------------------------- drops

def make_topology(tc: TopologyConfig, n: int, rng, beta: float | None = None) -> LinkTopology:
    if tc.model == "disk":
        return gen_disk_topology(n, tc.R, tc.r0, tc.beta if beta is None else beta, rng)
    if tc.model == "square":
        return gen_square_topology(n, tc.side, tc.len_min, tc.len_max, rng)
    return gen_closest_source_topology(n, tc.R, rng)


def draw_snr_table(cfg: ExperimentConfig, n: int, trial: int, *, beta=None, fading=False, key=()) -> tuple[LinkTopology, SnrTable]:
    seed = cfg.master_seed
    topo = make_topology(cfg.topology, n, seeding.make_rng(seed, *key, n, trial, seeding.TOPOLOGY), beta)
    model = cfg.channel.build(fading)
    gains = compute_gain_table(topo, model, seeding.make_rng(seed, *key, n, trial, seeding.CHANNEL))
    return topo, compute_snr_table(gains, cfg.budget.build())


def run_scheme(sc: SchemeConfig, s: SnrTable, rng: np.random.Generator):
    """Return ``(per-link rates, schedule or None)`` for one block."""
    if sc.scheme == "tdma":
        return time_sharing_rate(s).per_link_bits_s_hz, None
    if sc.scheme == "all_on":
        sched = all_on_schedule(s.n)
    else:
        prio = random_priority(s.n, rng)
        if sc.scheme == "itlinq":
            sched = itlinq_schedule(s, prio, sc.itlinq_params())
        elif sc.scheme == "fair_itlinq":
            sched = fair_itlinq_schedule(s, prio, sc.fair_params())
        else:
            sched = flashlinq_schedule(s, prio, sc.gamma_tx_db, sc.gamma_rx_db, sc.rx_aggregate)
    return link_rates(sched, s).per_link_bits_s_hz, sched


def _rate_trial(job):
    cfg_json, n, trial = job
    cfg = ExperimentConfig.model_validate_json(cfg_json)
    _, s = draw_snr_table(cfg, n, trial)
    out = {}
    for k, sc in enumerate(cfg.all_schemes):
        rng = seeding.make_rng(cfg.master_seed, n, trial, seeding.PRIORITY, k)
        rates, sched = run_scheme(sc, s, rng)
        info = {"rates": rates}
        if sched is not None:
            info["active"] = int(sched.active.sum())
            info["itis"] = is_itis(sched.active_links, s)
            if cfg.dump_link_rates:
                info["rows"] = rate_rows(sched, s, trial, sc.name)
        out[sc.name] = info
    return out


def _rate_trials(cfg: ExperimentConfig, n: int) -> list[dict]:
    jobs = [(cfg.canonical_json(), n, t) for t in range(cfg.trials)]
    return _map(_rate_trial, jobs, cfg.workers)


def _require_schemes(cfg: ExperimentConfig) -> None:
    if not cfg.all_schemes:
        raise ValueError(f"{cfg.experiment} needs at least one scheme")


def run_sum_rate_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    _require_schemes(cfg)
    exp = "sum_rate_sweep"
    rows, samples = [], {}
    for n in cfg.n_list:
        trials = _rate_trials(cfg, n)
        for sc in cfg.all_schemes:
            name = sc.name
            sums = np.array([t[name]["rates"].sum() for t in trials])
            samples[(n, name, "sum_rate")] = sums
            rows.append(Row(exp, n, name, "sum_rate_mean", *mean_stderr(sums)))
            rows.append(Row(exp, n, name, "sum_rate_median", float(np.median(sums)), 0.0))
            if "active" in trials[0][name]:
                act = np.array([t[name]["active"] / n for t in trials])
                rows.append(Row(exp, n, name, "active_fraction", *mean_stderr(act)))
                itis = np.array([float(t[name]["itis"]) for t in trials])
                rows.append(Row(exp, n, name, "global_itis_rate", *mean_stderr(itis)))
    return ExperimentResult(exp, rows, samples=samples)


def run_link_rate_cdf(cfg: ExperimentConfig) -> ExperimentResult:
    _require_schemes(cfg)
    if len(cfg.n_list) != 1:
        raise ValueError("link_rate_cdf takes exactly one n")
    exp = "link_rate_cdf"
    n = cfg.n_list[0]
    trials = _rate_trials(cfg, n)
    rows, cdfs, samples, link_rows = [], {}, {}, []
    for sc in cfg.all_schemes:
        name = sc.name
        per_link = np.concatenate([t[name]["rates"] for t in trials])
        sums = np.array([t[name]["rates"].sum() for t in trials])
        samples[(n, name, "link_rate")] = per_link
        samples[(n, name, "sum_rate")] = sums
        link_cdf = cdfs[(n, name, "link_rate")] = empirical_cdf(per_link)
        sum_cdf = cdfs[(n, name, "sum_rate")] = empirical_cdf(sums)
        rows.append(Row(exp, n, name, "link_rate_mean", *mean_stderr(per_link)))
        rows.append(Row(exp, n, name, "sum_rate_mean", *mean_stderr(sums)))
        rows.append(Row(exp, n, name, "sum_rate_median", float(np.median(sums)), 0.0))
        low = (per_link < cfg.low_rate_threshold).astype(float)
        rows.append(Row(exp, n, name, f"link_rate_below_{cfg.low_rate_threshold:g}", *mean_stderr(low)))
        for q in CDF_LEVELS:
            rows.append(Row(exp, n, name, f"link_rate_q{q:.2f}", link_cdf.quantile(q), 0.0))
            rows.append(Row(exp, n, name, f"sum_rate_q{q:.2f}", sum_cdf.quantile(q), 0.0))
        for t in trials:
            link_rows.extend(t[name].get("rows", ()))
    return ExperimentResult(exp, rows, cdfs, samples, link_rows)


# ---------------------------------------------------------------- covers

def _beta_key(beta: float) -> int:
    return int(round(beta * 1_000_000))


def config_gamma(cfg: ExperimentConfig) -> float:
    budget = cfg.budget.build()
    return gamma_constant(
        10 ** (budget.tx_power_dbm / 10), 10 ** (budget.noise_power_dbm / 10),
        cfg.channel.g0, cfg.topology.r0, cfg.channel.alpha,
    )


def _cover_kappa(cfg: ExperimentConfig, topo: LinkTopology, s: SnrTable, beta: float) -> int:
    if cfg.cover == "exact_itis":
        return exact_itis_cover(s).kappa
    if cfg.cover == "greedy_coloring":
        d_th = threshold_distance(s.n, config_gamma(cfg), cfg.topology.r0, beta)
        return greedy_coloring(build_conflict_graph(topo, d_th)).kappa
    return greedy_itis_cover(s).kappa


def _cover_trial(job):
    cfg_json, beta, n, trial, fading = job
    cfg = ExperimentConfig.model_validate_json(cfg_json)
    key = (_beta_key(beta),)
    topo, s = draw_snr_table(cfg, n, trial, beta=beta, key=key)
    out = {"plain": _cover_kappa(cfg, topo, s, beta)}
    if fading:
        # same drop, faded gains
        _, sf = draw_snr_table(cfg, n, trial, beta=beta, fading=True, key=key)
        out["fading"] = _cover_kappa(cfg, topo, sf, beta)
    return out


def _check_disk(cfg: ExperimentConfig) -> None:
    if cfg.topology.model != "disk":
        raise ValueError(f"{cfg.experiment} runs on the disk model")
    if cfg.channel.model == "itu1411":
        raise ValueError(f"{cfg.experiment} needs a path-loss channel")


def _label(beta: float, variant: str) -> str:
    return f"beta={beta:g}/{variant}"


def _kappas(cfg: ExperimentConfig, fading: bool):
    """Yield ``(beta, n, {variant: kappa array})``."""
    for beta in cfg.betas:
        for n in cfg.n_list:
            jobs = [(cfg.canonical_json(), beta, n, t, fading) for t in range(cfg.trials)]
            res = _map(_cover_trial, jobs, cfg.workers)
            yield beta, n, {v: np.array([r[v] for r in res], dtype=float) for v in res[0]}


def run_fraction_vs_n(cfg: ExperimentConfig, fading: bool | None = None) -> ExperimentResult:
    _check_disk(cfg)
    fading = cfg.fading if fading is None else fading
    exp = "fading_fraction" if fading else "fraction_vs_n"
    rows, samples = [], {}
    for beta, n, kap in _kappas(cfg, fading):
        for variant, k in kap.items():
            label = _label(beta, "rayleigh" if variant == "fading" else "pathloss")
            samples[(n, label, "kappa")] = k
            rows.append(Row(exp, n, label, "inv_kappa_mean", *mean_stderr(1.0 / k)))
            rows.append(Row(exp, n, label, "kappa_mean", *mean_stderr(k)))
        if fading:
            diff = 1.0 / kap["fading"] - 1.0 / kap["plain"]
            rows.append(Row(exp, n, _label(beta, "rayleigh-minus-pathloss"), "inv_kappa_mean", *mean_stderr(diff)))
        if n >= 2 and (beta != 1 or n >= 3):
            lam, _ = theoretical_fraction(beta, n, cfg.topology.R, config_gamma(cfg))
            rows.append(Row(exp, n, _label(beta, "theory"), "lambda", lam, 0.0))
    for n in cfg.n_list:
        rows.append(Row(exp, n, "tdma", "lambda", 1.0 / n, 0.0))
    return ExperimentResult(exp, rows, samples=samples)


def run_fading_fraction(cfg: ExperimentConfig) -> ExperimentResult:
    return run_fraction_vs_n(cfg, fading=True)


def run_gap_vs_n(cfg: ExperimentConfig) -> ExperimentResult:
    _check_disk(cfg)
    exp = "gap_vs_n"
    rows, samples = [], {}
    for beta, n, kap in _kappas(cfg, cfg.fading):
        for variant, k in kap.items():
            label = _label(beta, "rayleigh" if variant == "fading" else "pathloss")
            gap = math.log2(3 * n) / k
            samples[(n, label, "gap_bits")] = gap
            rows.append(Row(exp, n, label, "gap_bits_mean", *mean_stderr(gap)))
    return ExperimentResult(exp, rows, samples=samples)


def run_theory_curves(cfg: ExperimentConfig) -> ExperimentResult:
    exp = "theory_curves"
    rows = []
    for n in cfg.n_list:
        rows.append(Row(exp, n, "tdma", "lambda", 1.0 / n, 0.0))
        for beta in cfg.betas:
            if n < 2 or (beta == 1 and n < 3):
                continue
            lam, gap = theoretical_fraction(beta, n, constant=cfg.theory_constant)
            rows.append(Row(exp, n, _label(beta, "theory"), "lambda", lam, 0.0))
            rows.append(Row(exp, n, _label(beta, "theory"), "gap_bits", gap, 0.0))
    return ExperimentResult(exp, rows)


RUNNERS: dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    "sum_rate_sweep": run_sum_rate_sweep,
    "link_rate_cdf": run_link_rate_cdf,
    "fraction_vs_n": run_fraction_vs_n,
    "fading_fraction": run_fading_fraction,
    "gap_vs_n": run_gap_vs_n,
    "theory_curves": run_theory_curves,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.experiment](cfg)
