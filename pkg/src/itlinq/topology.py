"""Random placement of source/destination pairs.

Three drop models are supported:

* ``disk``: sources uniform on a disk of radius ``R``; each destination
  uniform on the disk of radius ``r0 * n**-beta`` around its source.
* ``square``: sources uniform on a ``side x side`` square; each link has a
  uniform length in ``[len_min, len_max]`` and a uniform direction.
* ``closest_source``: ``2n`` points uniform on a disk, half of them sources;
  each destination is matched to its nearest still-unmatched source.

All generators are deterministic functions of their parameters and seed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .seeding import as_rng


class TopologyModel(str, Enum):
    DISK = "disk"
    SQUARE = "square"
    CLOSEST_SOURCE = "closest_source"


@dataclass(frozen=True)
class LinkTopology:
    """Positions of ``n`` links, in meters.

    ``src[i]`` transmits to ``dst[i]``. ``params`` echoes the generation
    parameters and ``seed`` the seed they were drawn with (``None`` for
    hand-built layouts).
    """

    src: np.ndarray
    dst: np.ndarray
    model: TopologyModel
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        src = np.array(self.src, dtype=float).reshape(-1, 2)
        dst = np.array(self.dst, dtype=float).reshape(-1, 2)
        if src.shape != dst.shape or src.shape[0] == 0:
            raise ValueError("src and dst must be non-empty and of equal length")
        src.setflags(write=False)
        dst.setflags(write=False)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "model", TopologyModel(self.model))

    @property
    def n(self) -> int:
        return self.src.shape[0]

    def link_lengths(self) -> np.ndarray:
        return np.hypot(*(self.dst - self.src).T)

    def cross_distances(self) -> np.ndarray:
        """``d[i, j]`` = distance from source ``j`` to destination ``i``."""
        diff = self.dst[:, None, :] - self.src[None, :, :]
        return np.hypot(diff[..., 0], diff[..., 1])

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model.value,
            "params": dict(self.params),
            "seed": self.seed,
            "src": self.src.tolist(),
            "dst": self.dst.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "LinkTopology":
        return cls(
            src=np.asarray(d["src"], dtype=float),
            dst=np.asarray(d["dst"], dtype=float),
            model=d["model"],
            params=dict(d.get("params", {})),
            seed=d.get("seed"),
        )

    @classmethod
    def from_json(cls, text: str) -> "LinkTopology":
        return cls.from_dict(json.loads(text))


def _uniform_disk(rng: np.random.Generator, n: int, radius) -> np.ndarray:
    # area-uniform: radius scales with sqrt(u)
    r = np.asarray(radius) * np.sqrt(rng.random(n))
    theta = rng.uniform(0.0, 2 * np.pi, n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def _check_count(n):
    if int(n) != n or n < 1:
        raise ValueError(f"link count must be a positive integer, got {n!r}")
    return int(n)


def gen_disk_topology(n: int, R: float, r0: float, beta: float, seed: int) -> LinkTopology:
    n = _check_count(n)
    if R <= 0 or r0 <= 0 or beta <= 0:
        raise ValueError("R, r0 and beta must all be positive")
    rng = as_rng(seed)
    src = _uniform_disk(rng, n, R)
    r_n = r0 * float(n) ** (-beta)
    dst = src + _uniform_disk(rng, n, r_n)
    params = {"R": R, "r0": r0, "beta": beta, "r_n": r_n}
    return LinkTopology(src, dst, TopologyModel.DISK, params, _seed_of(seed))


def gen_square_topology(
    n: int, side: float, len_min: float, len_max: float, seed: int
) -> LinkTopology:
    n = _check_count(n)
    if not (0 < len_min <= len_max <= side):
        raise ValueError("need 0 < len_min <= len_max <= side")
    rng = as_rng(seed)
    src = rng.uniform(0.0, side, (n, 2))
    length = rng.uniform(len_min, len_max, n)
    theta = rng.uniform(0.0, 2 * np.pi, n)
    dst = src + length[:, None] * np.column_stack((np.cos(theta), np.sin(theta)))
    params = {"side": side, "len_min": len_min, "len_max": len_max}
    return LinkTopology(src, dst, TopologyModel.SQUARE, params, _seed_of(seed))


def pair_closest_sources(src_pts: np.ndarray, dst_pts: np.ndarray) -> np.ndarray:
    """Greedy one-to-one matching of destinations to nearest free sources.

    Destinations are visited in index order; distance ties go to the lower
    source index. Returns ``match`` with ``match[j]`` the source of
    destination ``j``.
    """
    src_pts = np.asarray(src_pts, dtype=float)
    dst_pts = np.asarray(dst_pts, dtype=float)
    d = np.linalg.norm(dst_pts[:, None, :] - src_pts[None, :, :], axis=-1)
    taken = np.zeros(len(src_pts), dtype=bool)
    match = np.empty(len(dst_pts), dtype=int)
    for j in range(len(dst_pts)):
        row = np.where(taken, np.inf, d[j])
        k = int(np.argmin(row))  # argmin returns the first minimum
        match[j] = k
        taken[k] = True
    return match


def gen_closest_source_topology(n: int, R: float, seed: int) -> LinkTopology:
    n = _check_count(n)
    if R <= 0:
        raise ValueError("R must be positive")
    rng = as_rng(seed)
    pts = _uniform_disk(rng, 2 * n, R)
    src_pts, dst_pts = pts[:n], pts[n:]
    match = pair_closest_sources(src_pts, dst_pts)
    return LinkTopology(
        src_pts[match], dst_pts, TopologyModel.CLOSEST_SOURCE, {"R": R}, _seed_of(seed)
    )


def pairwise_source_distances(t: LinkTopology) -> np.ndarray:
    diff = t.src[:, None, :] - t.src[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def _seed_of(seed) -> int | None:
    return int(seed) if isinstance(seed, (int, np.integer)) else None
