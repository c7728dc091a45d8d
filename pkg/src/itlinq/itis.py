"""Information-theoretic independent sets (ITIS) and covers.

A link subset ``S`` is an ITIS when every member ``i`` satisfies::

    snr[i] >= max_{j in S-i} inr[i, j] * max_{k in S-i} inr[k, i]

i.e. treating interference as noise is optimal within ``S`` up to a
constant gap. The minimum number of ITISs covering all links bounds the
fraction of the capacity region reachable by time-sharing between them.
Covers come either directly from the ITIS test or from colouring the
geometric conflict graph, whose independent sets are ITISs under the
disk model.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .channel import SnrTable
from .topology import LinkTopology, pairwise_source_distances

EXACT_CHROMATIC_CAP = 12
EXACT_COVER_CAP = 10


class CoverMethod(str, Enum):
    GREEDY_COLORING = "greedy_coloring"
    EXACT_CHROMATIC = "exact_chromatic"
    GREEDY_ITIS_COVER = "greedy_itis_cover"
    EXACT_ITIS_COVER = "exact_itis_cover"


@dataclass(frozen=True)
class ConflictGraph:
    adjacency: np.ndarray
    threshold_m: float

    def __post_init__(self):
        a = np.array(self.adjacency, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if a.diagonal().any():
            raise ValueError("self-loops are not allowed")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], threshold_m: float = float("nan")):
        a = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            a[i, j] = a[j, i] = True
        return cls(a, threshold_m)

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    def edge_list_csv(self) -> str:
        return "i,j\n" + "".join(f"{i},{j}\n" for i, j in self.edges())


@dataclass(frozen=True)
class CoverResult:
    classes: tuple[tuple[int, ...], ...]
    method: CoverMethod

    def __post_init__(self):
        classes = tuple(tuple(sorted(int(x) for x in c)) for c in self.classes)
        classes = tuple(sorted(classes))
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "method", CoverMethod(self.method))

    @property
    def kappa(self) -> int:
        return len(self.classes)

    def is_partition_of(self, n: int) -> bool:
        flat = [x for c in self.classes for x in c]
        return sorted(flat) == list(range(n)) and all(self.classes)

    def to_dict(self) -> dict:
        return {"kappa": self.kappa, "method": self.method.value, "classes": [list(c) for c in self.classes]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _subset_index(subset, n: int) -> np.ndarray:
    idx = np.unique(np.fromiter((int(i) for i in subset), dtype=int))
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise IndexError(f"link ids must lie in [0, {n})")
    return idx


def is_itis(subset: Iterable[int], s: SnrTable) -> bool:
    idx = _subset_index(subset, s.n)
    if idx.size <= 1:
        return True
    sub = s.inr[np.ix_(idx, idx)]  # zero diagonal, so an empty max is 0
    incoming = sub.max(axis=1)
    outgoing = sub.max(axis=0)
    return bool(np.all(s.snr[idx] >= incoming * outgoing))


def is_itis_sufficient(subset: Iterable[int], s: SnrTable) -> bool:
    """Pairwise test: every INR touching link ``i`` is at most ``sqrt(snr[i])``."""
    idx = _subset_index(subset, s.n)
    if idx.size <= 1:
        return True
    sub = s.inr[np.ix_(idx, idx)]
    root = np.sqrt(s.snr[idx])
    return bool(np.all(sub.max(axis=1) <= root) and np.all(sub.max(axis=0) <= root))


def threshold_distance(n: int, gamma: float, r0: float, beta: float) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    return gamma * n ** (-beta / 2) + r0 * n ** (-beta)


def gamma_constant(p_linear: float, n_linear: float, g0: float, r0: float, alpha: float) -> float:
    if min(p_linear, n_linear, g0, r0, alpha) <= 0:
        raise ValueError("all arguments must be positive")
    return (p_linear / n_linear * g0 * r0**alpha) ** (1.0 / (2.0 * alpha))


def build_conflict_graph(t: LinkTopology, d_th: float) -> ConflictGraph:
    a = pairwise_source_distances(t) <= d_th
    np.fill_diagonal(a, False)
    return ConflictGraph(a, float(d_th))


def smallest_last_order(g: ConflictGraph) -> list[int]:
    """Degeneracy order; ties removed by lowest index."""
    adj = g.adjacency
    deg = adj.sum(axis=1).astype(float)
    removed = np.zeros(g.n, dtype=bool)
    removal = []
    for _ in range(g.n):
        v = int(np.argmin(np.where(removed, np.inf, deg)))
        removal.append(v)
        removed[v] = True
        deg[adj[v]] -= 1
    return removal[::-1]


def greedy_coloring(g: ConflictGraph, order: Sequence[int] | None = None) -> CoverResult:
    if order is None:
        order = smallest_last_order(g)
    _check_perm(order, g.n)
    color = np.full(g.n, -1)
    for v in order:
        used = set(color[g.adjacency[v]].tolist())
        c = 0
        while c in used:
            c += 1
        color[v] = c
    classes = [np.flatnonzero(color == c).tolist() for c in range(color.max() + 1)]
    return CoverResult(classes, CoverMethod.GREEDY_COLORING)


def _min_partition(n: int, ok: np.ndarray) -> list[int]:
    """Minimum partition of ``{0..n-1}`` into masks with ``ok[mask]``.

    ``ok`` must be hereditary (closed under taking subsets) and true on
    singletons, so a minimum cover can always be made disjoint.
    """

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, int]:
        if mask == 0:
            return 0, 0
        low = mask & -mask
        rest = mask ^ low
        top = (1 << 64, 0)
        sub = rest
        while True:
            part = sub | low
            if ok[part]:
                cost = best(mask ^ part)[0] + 1
                if cost < top[0]:
                    top = (cost, part)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return top

    parts = []
    mask = (1 << n) - 1
    while mask:
        part = best(mask)[1]
        parts.append(part)
        mask ^= part
    return parts


def _mask_members(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]


def exact_chromatic(g: ConflictGraph, cap: int = EXACT_CHROMATIC_CAP) -> CoverResult:
    n = g.n
    if n > cap:
        raise ValueError(f"exact chromatic number is limited to n <= {cap}")
    nbr = [sum(1 << j for j in np.flatnonzero(g.adjacency[i]).tolist()) for i in range(n)]
    ok = np.zeros(1 << n, dtype=bool)
    ok[0] = True
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        ok[mask] = ok[rest] and not (nbr[low] & rest)
    parts = _min_partition(n, ok)
    return CoverResult([_mask_members(p, n) for p in parts], CoverMethod.EXACT_CHROMATIC)


def exact_itis_cover(s: SnrTable, cap: int = EXACT_COVER_CAP) -> CoverResult:
    n = s.n
    if n > cap:
        raise ValueError(f"exact ITIS cover is limited to n <= {cap}")
    ok = np.zeros(1 << n, dtype=bool)
    for mask in range(1 << n):
        ok[mask] = is_itis(_mask_members(mask, n), s)
    # ITIS is hereditary: dropping links only lowers the maxima
    parts = _min_partition(n, ok)
    return CoverResult([_mask_members(p, n) for p in parts], CoverMethod.EXACT_ITIS_COVER)


def greedy_itis_cover(s: SnrTable, order: Sequence[int] | None = None) -> CoverResult:
    """First-fit cover: each link joins the first class that stays an ITIS."""
    n = s.n
    order = list(range(n)) if order is None else list(order)
    _check_perm(order, n)
    snr, inr = s.snr, s.inr
    members: list[list[int]] = []
    in_max: list[np.ndarray] = []
    out_max: list[np.ndarray] = []
    for link in order:
        for c, mem in enumerate(members):
            m = np.asarray(mem)
            to_link = inr[m, link]  # interference the new link causes at members
            from_link = inr[link, m]  # interference the new link receives
            if snr[link] < from_link.max() * to_link.max():
                continue
            new_in = np.maximum(in_max[c], to_link)
            new_out = np.maximum(out_max[c], from_link)
            if np.any(snr[m] < new_in * new_out):
                continue
            mem.append(link)
            in_max[c] = np.append(new_in, from_link.max())
            out_max[c] = np.append(new_out, to_link.max())
            break
        else:
            members.append([link])
            in_max.append(np.zeros(1))
            out_max.append(np.zeros(1))
    return CoverResult(members, CoverMethod.GREEDY_ITIS_COVER)


def theoretical_fraction(
    beta: float,
    n: int,
    R: float | None = None,
    gamma: float | None = None,
    *,
    constant: float | None = None,
) -> tuple[float, float]:
    """Asymptotic ``(lambda, gap_bits)`` guarantee for the disk model.

    For ``beta < 1`` the prefactor ``2 pi R^2 / (sqrt(3) gamma^2)`` is used
    unless ``constant`` overrides it.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")
    log3n = math.log2(3 * n)
    if beta < 1:
        if constant is None:
            if R is None or gamma is None:
                raise ValueError("beta < 1 needs R and gamma, or constant")
            constant = 2 * math.pi * R**2 / (math.sqrt(3) * gamma**2)
        lam = constant * n ** (beta - 1)
        return lam, lam * log3n
    if beta == 1:
        if n < 3:
            raise ValueError("beta == 1 needs n >= 3")
        lnn = math.log(n)
        lam = math.log(lnn) / lnn
        return lam, math.log2(lnn) + math.log2(3) * lam
    lam = 1.0 / (math.floor(1.0 / (beta - 1) + 0.5) + 1)
    return lam, lam * log3n


def _check_perm(order: Sequence[int], n: int) -> None:
    if sorted(int(x) for x in order) != list(range(n)):
        raise ValueError("order must be a permutation of the link ids")
