"""Experiment configuration: schema, presets, overrides."""
from __future__ import annotations

import copy
import hashlib
import json
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channel import Itu1411, LinkBudget, PathLoss, RayleighPathLoss, noise_power_dbm
from .scheduling import FairItlinqParams, ItlinqParams


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True, frozen=True)


class TopologyConfig(_Strict):
    model: Literal["disk", "square", "closest_source"] = "square"
    R: float = Field(10_000.0, gt=0)
    r0: float = Field(1_000.0, gt=0)
    beta: float = Field(1.0, gt=0)
    side: float = Field(1_000.0, gt=0)
    len_min: float = Field(2.0, gt=0)
    len_max: float = Field(65.0, gt=0)

    @model_validator(mode="after")
    def _bounds(self):
        if self.model == "square" and not self.len_min <= self.len_max <= self.side:
            raise ValueError("need len_min <= len_max <= side")
        return self


class ChannelConfig(_Strict):
    model: Literal["pathloss", "rayleigh", "itu1411"] = "itu1411"
    g0: float = Field(1.0, gt=0)
    alpha: float = Field(2.5, gt=0)
    carrier_hz: float = Field(2.4e9, gt=0)
    h_b: float = Field(1.5, gt=0)
    h_m: float = Field(1.5, gt=0)
    shadow_sigma_db: float = Field(10.0, ge=0)
    antenna_gain_db_per_device: float = -2.5

    def build(self, fading: bool = False):
        if self.model == "itu1411":
            return Itu1411(self.carrier_hz, self.h_b, self.h_m, self.shadow_sigma_db, self.antenna_gain_db_per_device)
        if self.model == "rayleigh" or fading:
            return RayleighPathLoss(self.g0, self.alpha)
        return PathLoss(self.g0, self.alpha)


class BudgetConfig(_Strict):
    tx_power_dbm: float = 20.0
    noise_power_dbm: Optional[float] = None
    noise_psd_dbm_hz: Optional[float] = -184.0
    noise_figure_db: float = 7.0
    bandwidth_hz: float = Field(5e6, gt=0)

    def build(self) -> LinkBudget:
        if self.noise_power_dbm is not None:
            noise = self.noise_power_dbm
        elif self.noise_psd_dbm_hz is not None:
            noise = noise_power_dbm(self.noise_psd_dbm_hz, self.bandwidth_hz, self.noise_figure_db)
        else:
            raise ValueError("budget needs noise_power_dbm or noise_psd_dbm_hz")
        return LinkBudget(self.tx_power_dbm, noise, self.bandwidth_hz)


SchemeName = Literal["itlinq", "fair_itlinq", "flashlinq", "tdma", "all_on"]


class SchemeConfig(_Strict):
    scheme: SchemeName
    label: Optional[str] = None
    eta: float = Field(0.7, gt=0, le=1)
    m_db: float = 25.0
    snr_th_db: float = 110.0
    eta_bar: float = Field(0.6, gt=0, le=1)
    m_bar_db: float = 20.0
    gamma_tx_db: float = 9.0
    gamma_rx_db: float = 9.0
    rx_aggregate: Literal["sum", "max"] = "sum"

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.scheme == "itlinq":
            return f"itlinq(eta={self.eta:g})"
        return self.scheme

    def itlinq_params(self) -> ItlinqParams:
        return ItlinqParams(self.eta, self.m_db)

    def fair_params(self) -> FairItlinqParams:
        return FairItlinqParams(self.itlinq_params(), self.snr_th_db, self.eta_bar, self.m_bar_db)


Experiment = Literal[
    "sum_rate_sweep", "link_rate_cdf", "fraction_vs_n", "fading_fraction", "gap_vs_n", "theory_curves"
]


class ExperimentConfig(_Strict):
    experiment: Experiment = "sum_rate_sweep"
    topology: TopologyConfig = TopologyConfig()
    channel: ChannelConfig = ChannelConfig()
    budget: BudgetConfig = BudgetConfig()
    schemes: list[SchemeConfig] = Field(default_factory=list)
    scheme: Optional[SchemeConfig] = None
    n_list: list[int] = Field(default_factory=lambda: [8, 16, 32, 64, 128, 256, 512, 1024])
    trials: int = Field(100, ge=1)
    master_seed: int = Field(0, ge=0)
    betas: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    fading: bool = False
    cover: Literal["greedy_itis", "exact_itis", "greedy_coloring"] = "greedy_itis"
    theory_constant: float = Field(1.0, gt=0)
    low_rate_threshold: float = Field(0.1, ge=0)
    dump_link_rates: bool = False
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ValueError("n_list must be a non-empty list of positive integers")
        if any(b <= 0 for b in self.betas):
            raise ValueError("betas must be positive")
        names = [s.name for s in self.all_schemes]
        if len(set(names)) != len(names):
            raise ValueError(f"scheme labels must be unique, got {names}")
        return self

    @property
    def all_schemes(self) -> list[SchemeConfig]:
        return self.schemes + ([self.scheme] if self.scheme is not None else [])

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


PRESETS: dict[str, dict[str, Any]] = {
    # disk model with pure path loss
    "iv-a": {
        "experiment": "fraction_vs_n",
        "topology": {"model": "disk", "R": 10_000.0, "r0": 1_000.0, "beta": 0.5},
        "channel": {"model": "pathloss", "g0": 1.0, "alpha": 2.5},
        "budget": {"tx_power_dbm": 10.0, "noise_power_dbm": -110.0, "bandwidth_hz": 1.0},
        "schemes": [{"scheme": "itlinq", "eta": 0.5, "m_db": 25.0}, {"scheme": "tdma"}],
        "betas": [0.5, 1.0, 2.0],
        "n_list": [8, 16, 32, 64, 128, 256, 512, 1024],
        "trials": 100,
    },
    # square drop with ITU-1411 LoS
    "iv-b": {
        "experiment": "sum_rate_sweep",
        "topology": {"model": "square", "side": 1_000.0, "len_min": 2.0, "len_max": 65.0},
        "channel": {
            "model": "itu1411",
            "carrier_hz": 2.4e9,
            "h_b": 1.5,
            "h_m": 1.5,
            "shadow_sigma_db": 10.0,
            "antenna_gain_db_per_device": -2.5,
        },
        "budget": {
            "tx_power_dbm": 20.0,
            "noise_psd_dbm_hz": -184.0,
            "noise_figure_db": 7.0,
            "bandwidth_hz": 5e6,
        },
        "schemes": [
            {"scheme": "itlinq", "eta": 0.5, "m_db": 25.0},
            {"scheme": "itlinq", "eta": 0.7, "m_db": 25.0},
            {"scheme": "itlinq", "eta": 1.0, "m_db": 25.0},
            {"scheme": "fair_itlinq", "eta": 0.7, "m_db": 25.0, "snr_th_db": 110.0, "eta_bar": 0.6, "m_bar_db": 20.0},
            {"scheme": "flashlinq", "gamma_tx_db": 9.0, "gamma_rx_db": 9.0},
            {"scheme": "all_on"},
        ],
        "n_list": [8, 16, 32, 64, 128, 256, 512, 1024],
        "trials": 100,
    },
}


def deep_merge(base: dict, top: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in top.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def parse_override(text: str) -> tuple[list[str], Any]:
    """``"a.b.0.c=VALUE"`` -> ``(["a", "b", "0", "c"], value)``.

    VALUE is read as JSON when it parses, else kept as a string.
    """
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ValueError(f"override must look like key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.split("."), value


def apply_override(raw: dict, path: list[str], value: Any) -> dict:
    out = copy.deepcopy(raw)
    node: Any = out
    for part in path[:-1]:
        if isinstance(node, list):
            node = node[int(part)]
        else:
            node = node.setdefault(part, {})
    last = path[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        node[last] = value
    return out


def build_config(raw: dict | None = None, preset: str | None = None, overrides=()) -> ExperimentConfig:
    """Preset, then file contents, then ``key=value`` overrides, then validation."""
    raw = dict(raw or {})
    preset = raw.pop("preset", None) if preset is None else preset
    if preset is not None:
        if preset not in PRESETS:
            raise KeyError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        raw = deep_merge(PRESETS[preset], raw)
    for ov in overrides:
        raw = apply_override(raw, *parse_override(ov))
    return ExperimentConfig.model_validate(raw)
