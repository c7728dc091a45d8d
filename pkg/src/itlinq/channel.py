"""Channel gains and SNR/INR tables.

Gains are linear power gains. ``g[i, j]`` is the gain from source ``j`` to
destination ``i``, so row ``i`` is everything destination ``i`` hears.
dB only appears in model parameters and link budgets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .topology import LinkTopology

SPEED_OF_LIGHT = 299_792_458.0


def db2lin(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def lin2db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class PathLoss:
    """Deterministic ``g0 * d**-alpha``."""

    g0: float = 1.0
    alpha: float = 2.5

    def __post_init__(self):
        if self.alpha <= 0 or self.g0 <= 0:
            raise ValueError("g0 and alpha must be positive")


@dataclass(frozen=True)
class RayleighPathLoss(PathLoss):
    """Path loss times an independent unit-mean exponential fade per entry."""


@dataclass(frozen=True)
class Itu1411:
    """ITU-R P.1411 line-of-sight two-slope model with log-normal shadowing.

    ``antenna_gain_db_per_device`` is counted twice per path (transmitting
    and receiving device).
    """

    carrier_hz: float = 2.4e9
    h_b: float = 1.5
    h_m: float = 1.5
    shadow_sigma_db: float = 10.0
    antenna_gain_db_per_device: float = -2.5

    def __post_init__(self):
        if self.carrier_hz <= 0 or self.h_b <= 0 or self.h_m <= 0:
            raise ValueError("carrier frequency and antenna heights must be positive")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadowing deviation must be non-negative")


ChannelModel = Union[PathLoss, RayleighPathLoss, Itu1411]


@dataclass(frozen=True)
class LinkBudget:
    tx_power_dbm: float
    noise_power_dbm: float
    bandwidth_hz: float = 1.0

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")


@dataclass(frozen=True)
class GainTable:
    g: np.ndarray

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("gain table must be square")
        if not np.all(np.isfinite(g)) or np.any(g <= 0):
            raise ValueError("gains must be positive and finite")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def to_csv(self, path) -> None:
        """Row = destination, column = source."""
        header = ",".join(f"src{j}" for j in range(self.n))
        np.savetxt(path, self.g, delimiter=",", header=header, comments="", fmt="%.10e")


@dataclass(frozen=True)
class SnrTable:
    """Linear SNR per link and INR per (destination, source) pair.

    ``inr[i, j]`` is the interference of source ``j`` at destination ``i``;
    the diagonal is stored as zero.
    """

    snr: np.ndarray
    inr: np.ndarray

    def __post_init__(self):
        snr = np.array(self.snr, dtype=float).reshape(-1)
        inr = np.array(self.inr, dtype=float)
        n = snr.shape[0]
        if inr.shape != (n, n):
            raise ValueError(f"inr must be {n}x{n}, got {inr.shape}")
        if np.any(snr <= 0):
            raise ValueError("snr entries must be positive")
        if np.any(inr < 0):
            raise ValueError("inr entries must be non-negative")
        np.fill_diagonal(inr, 0.0)
        snr.setflags(write=False)
        inr.setflags(write=False)
        object.__setattr__(self, "snr", snr)
        object.__setattr__(self, "inr", inr)

    @property
    def n(self) -> int:
        return self.snr.shape[0]

    @classmethod
    def from_matrix(cls, m) -> "SnrTable":
        """Diagonal is SNR, off-diagonal is INR."""
        m = np.asarray(m, dtype=float)
        return cls(np.diag(m).copy(), m)

    def scaled(self, c: float) -> "SnrTable":
        return SnrTable(self.snr * c, self.inr * c)

    def subtable(self, links) -> "SnrTable":
        idx = np.asarray(links, dtype=int)
        return SnrTable(self.snr[idx], self.inr[np.ix_(idx, idx)])


def pathloss_gain(d, g0: float = 1.0, alpha: float = 2.5):
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    out = g0 * d ** (-alpha)
    return float(out) if out.ndim == 0 else out


def rayleigh_fade(rng: np.random.Generator, size=None):
    return rng.exponential(1.0, size)


def itu1411_breakpoint(carrier_hz: float, h_b: float, h_m: float) -> tuple[float, float]:
    """Return ``(R_bp, L_bp)``: breakpoint distance (m) and loss there (dB)."""
    lam = SPEED_OF_LIGHT / carrier_hz
    r_bp = 4.0 * h_b * h_m / lam
    l_bp = abs(20.0 * math.log10(lam**2 / (8.0 * math.pi * h_b * h_m)))
    return r_bp, l_bp


def itu1411_loss_db(d, carrier_hz: float = 2.4e9, h_b: float = 1.5, h_m: float = 1.5):
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    r_bp, l_bp = itu1411_breakpoint(carrier_hz, h_b, h_m)
    ratio = np.log10(d / r_bp)
    out = l_bp + 6.0 + np.where(d <= r_bp, 20.0 * ratio, 40.0 * ratio)
    return float(out) if out.ndim == 0 else out


def lognormal_shadow_db(rng: np.random.Generator, sigma_db: float, size=None):
    if sigma_db < 0:
        raise ValueError("sigma_db must be non-negative")
    if sigma_db == 0:
        return 0.0 if size is None else np.zeros(size)
    return rng.normal(0.0, sigma_db, size)


def compute_gain_table(
    t: LinkTopology,
    m: ChannelModel,
    rng: np.random.Generator | None = None,
    *,
    fades: np.ndarray | None = None,
) -> GainTable:
    """Gain table for topology ``t`` under channel model ``m``.

    ``fades`` pins the Rayleigh fades (same shape as the table) instead of
    sampling them from ``rng``.
    """
    d = t.cross_distances()
    if np.any(d <= 0):
        raise ValueError("co-located source and destination")
    n = t.n
    if isinstance(m, Itu1411):
        budget_db = -itu1411_loss_db(d, m.carrier_hz, m.h_b, m.h_m)
        budget_db = budget_db + 2.0 * m.antenna_gain_db_per_device
        if m.shadow_sigma_db > 0:
            if rng is None:
                raise ValueError("shadowing needs an rng")
            budget_db = budget_db + lognormal_shadow_db(rng, m.shadow_sigma_db, (n, n))
        return GainTable(db2lin(budget_db))
    g = m.g0 * d ** (-m.alpha)
    if isinstance(m, RayleighPathLoss):
        if fades is None:
            if rng is None:
                raise ValueError("Rayleigh fading needs an rng")
            fades = rayleigh_fade(rng, (n, n))
        g = g * np.asarray(fades, dtype=float)
    return GainTable(g)


def compute_snr_table(g: GainTable, b: LinkBudget) -> SnrTable:
    p_over_n = 10.0 ** ((b.tx_power_dbm - b.noise_power_dbm) / 10.0)
    m = p_over_n * g.g
    return SnrTable(np.diag(m).copy(), m)


def noise_power_dbm(psd_dbm_hz: float, bandwidth_hz: float, noise_figure_db: float = 0.0) -> float:
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return psd_dbm_hz + 10.0 * math.log10(bandwidth_hz) + noise_figure_db
