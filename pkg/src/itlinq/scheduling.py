"""Priority-based link schedulers.

Every scheduler walks the links in priority order and decides each link
against the links already switched on. The top-priority link is always on
(except for TDMA, which picks a fixed slot). All thresholds admit a link on
equality.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import SnrTable, db2lin


@dataclass(frozen=True)
class PriorityOrder:
    """``perm[0]`` is the highest-priority link."""

    perm: np.ndarray

    def __post_init__(self):
        perm = np.array(self.perm, dtype=int).reshape(-1)
        if not np.array_equal(np.sort(perm), np.arange(perm.size)):
            raise ValueError("priority must be a permutation of 0..n-1")
        perm.setflags(write=False)
        object.__setattr__(self, "perm", perm)

    @property
    def n(self) -> int:
        return self.perm.size

    @classmethod
    def identity(cls, n: int) -> "PriorityOrder":
        return cls(np.arange(n))


@dataclass(frozen=True)
class ItlinqParams:
    eta: float = 0.7
    m_db: float = 25.0

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")


@dataclass(frozen=True)
class FairItlinqParams:
    base: ItlinqParams = ItlinqParams()
    snr_th_db: float = 110.0
    eta_bar: float = 0.6
    m_bar_db: float = 20.0

    def __post_init__(self):
        if not 0 < self.eta_bar <= self.base.eta:
            raise ValueError("eta_bar must lie in (0, base.eta]")


@dataclass(frozen=True)
class Schedule:
    active: np.ndarray
    priority: PriorityOrder
    scheme: str

    def __post_init__(self):
        active = np.array(self.active, dtype=bool).reshape(-1)
        if active.size != self.priority.n:
            raise ValueError("active vector and priority order differ in length")
        active.setflags(write=False)
        object.__setattr__(self, "active", active)

    @property
    def n(self) -> int:
        return self.active.size

    @property
    def active_links(self) -> np.ndarray:
        return np.flatnonzero(self.active)


def random_priority(n: int, rng: np.random.Generator) -> PriorityOrder:
    if n < 1:
        raise ValueError("n must be positive")
    return PriorityOrder(rng.permutation(n))


def _check(s: SnrTable, p: PriorityOrder) -> None:
    if s.n != p.n:
        raise ValueError(f"table has {s.n} links but priority has {p.n}")


def _itlinq_pass(s: SnrTable, p: PriorityOrder, rx_thresh: np.ndarray, tx_thresh: np.ndarray) -> np.ndarray:
    """Shared core of both ITLinQ variants.

    ``rx_thresh[j]`` bounds the INR link ``j``'s destination may see from
    each active source; ``tx_thresh[j]`` bounds what its source may cause
    at each active destination.
    """
    inr = s.inr
    active = np.zeros(s.n, dtype=bool)
    on = np.empty(s.n, dtype=int)
    k = 0
    for j in p.perm:
        if k:
            act = on[:k]
            if inr[j, act].max() > rx_thresh[j] or inr[act, j].max() > tx_thresh[j]:
                continue
        active[j] = True
        on[k] = j
        k += 1
    return active


def itlinq_schedule(s: SnrTable, p: PriorityOrder, params: ItlinqParams = ItlinqParams()) -> Schedule:
    _check(s, p)
    thresh = db2lin(params.m_db) * s.snr**params.eta
    return Schedule(_itlinq_pass(s, p, thresh, thresh), p, "itlinq")


def fair_itlinq_schedule(
    s: SnrTable, p: PriorityOrder, params: FairItlinqParams = FairItlinqParams()
) -> Schedule:
    _check(s, p)
    base = params.base
    rx = db2lin(base.m_db) * s.snr**base.eta
    strong = s.snr > db2lin(params.snr_th_db)
    tx = np.where(strong, db2lin(params.m_bar_db) * s.snr**params.eta_bar, rx)
    return Schedule(_itlinq_pass(s, p, rx, tx), p, "fair_itlinq")


def flashlinq_schedule(
    s: SnrTable,
    p: PriorityOrder,
    gamma_tx_db: float = 9.0,
    gamma_rx_db: float = 9.0,
    rx_aggregate: str = "sum",
) -> Schedule:
    """SIR-threshold scheduling.

    RX check: ``snr[j]`` over the interference from active links (summed,
    or the strongest one with ``rx_aggregate="max"``) must reach
    ``gamma_rx``. TX check: every active link ``i`` must keep
    ``snr[i] / inr[i, j] >= gamma_tx``.
    """
    _check(s, p)
    if rx_aggregate not in ("sum", "max"):
        raise ValueError("rx_aggregate must be 'sum' or 'max'")
    g_tx, g_rx = db2lin(gamma_tx_db), db2lin(gamma_rx_db)
    snr, inr = s.snr, s.inr
    active = np.zeros(s.n, dtype=bool)
    on = np.empty(s.n, dtype=int)
    k = 0
    for j in p.perm:
        if k:
            act = on[:k]
            seen = inr[j, act]
            interf = seen.sum() if rx_aggregate == "sum" else seen.max()
            # snr / interf >= g  rewritten without division
            if snr[j] < g_rx * interf:
                continue
            if np.any(snr[act] < g_tx * inr[act, j]):
                continue
        active[j] = True
        on[k] = j
        k += 1
    return Schedule(active, p, "flashlinq")


def tdma_schedule(n: int, slot: int) -> Schedule:
    if not 0 <= slot < n:
        raise IndexError(f"slot {slot} out of range for {n} links")
    active = np.zeros(n, dtype=bool)
    active[slot] = True
    return Schedule(active, PriorityOrder.identity(n), "tdma")


def all_on_schedule(n: int) -> Schedule:
    return Schedule(np.ones(n, dtype=bool), PriorityOrder.identity(n), "all_on")
