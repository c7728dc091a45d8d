"""Rates achieved by a schedule when every receiver treats interference as noise."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .channel import SnrTable
from .itis import CoverResult
from .scheduling import Schedule


@dataclass(frozen=True)
class RateReport:
    per_link_bits_s_hz: np.ndarray
    bandwidth_hz: float | None = None

    @property
    def sum_bits_s_hz(self) -> float:
        return float(self.per_link_bits_s_hz.sum())

    @property
    def per_link_bits_s(self) -> np.ndarray | None:
        if self.bandwidth_hz is None:
            return None
        return self.per_link_bits_s_hz * self.bandwidth_hz


@dataclass(frozen=True)
class FractionReport:
    kappa: int
    n: int

    @property
    def lam(self) -> float:
        return 1.0 / self.kappa

    @property
    def gap_bits(self) -> float:
        return math.log2(3 * self.n) / self.kappa


def _sinr_all(schedule: Schedule, s: SnrTable) -> np.ndarray:
    act = schedule.active.astype(float)
    interference = s.inr @ act  # inr diagonal is zero
    return np.where(schedule.active, s.snr / (1.0 + interference), 0.0)


def sinr(schedule: Schedule, s: SnrTable, i: int) -> float:
    if not schedule.active[i]:
        raise ValueError(f"link {i} is not scheduled")
    others = schedule.active.copy()
    others[i] = False
    return float(s.snr[i] / (1.0 + s.inr[i, others].sum()))


def link_rates(schedule: Schedule, s: SnrTable, bandwidth_hz: float | None = None) -> RateReport:
    if schedule.n != s.n:
        raise ValueError("schedule and table sizes differ")
    return RateReport(np.log2(1.0 + _sinr_all(schedule, s)), bandwidth_hz)


def time_sharing_rate(s: SnrTable, bandwidth_hz: float | None = None) -> RateReport:
    return RateReport(np.log2(1.0 + s.snr) / s.n, bandwidth_hz)


def fraction_from_cover(cover: CoverResult, n: int) -> FractionReport:
    if cover.kappa < 1:
        raise ValueError("a cover needs at least one class")
    return FractionReport(cover.kappa, n)


@dataclass(frozen=True)
class EmpiricalCdf:
    """Right-continuous step function through ``(x[k], p[k])``."""

    x: np.ndarray
    p: np.ndarray

    def __call__(self, value) -> np.ndarray | float:
        idx = np.searchsorted(self.x, value, side="right")
        out = np.where(idx > 0, self.p[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if out.ndim == 0 else out

    def quantile(self, q: float) -> float:
        k = int(np.searchsorted(self.p, q, side="left"))
        return float(self.x[min(k, self.x.size - 1)])


def empirical_cdf(samples) -> EmpiricalCdf:
    v = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    if v.size == 0:
        raise ValueError("empirical CDF of an empty sample")
    x = np.unique(v)
    counts = np.searchsorted(v, x, side="right")
    return EmpiricalCdf(x, counts / v.size)


RATE_CSV_COLUMNS = ("trial", "scheme", "link", "active", "sinr_db", "rate_bits_s_hz")


def rate_rows(schedule: Schedule, s: SnrTable, trial: int, scheme: str) -> list[tuple]:
    sinr_lin = _sinr_all(schedule, s)
    rates = np.log2(1.0 + sinr_lin)
    rows = []
    for i in range(s.n):
        sdb = 10.0 * math.log10(sinr_lin[i]) if schedule.active[i] else float("nan")
        rows.append((trial, scheme, i, int(schedule.active[i]), sdb, float(rates[i])))
    return rows


def rate_rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RATE_CSV_COLUMNS)
    for r in rows:
        w.writerow([r[0], r[1], r[2], r[3], f"{r[4]:.6f}", f"{r[5]:.6f}"])
    return buf.getvalue()
