import math

import numpy as np
import pytest
from pydantic import ValidationError

from itlinq.config import build_config
from itlinq.harness import (
    CSV_COLUMNS,
    draw_snr_table,
    run_experiment,
    run_fraction_vs_n,
    run_gap_vs_n,
    run_link_rate_cdf,
    run_sum_rate_sweep,
    run_theory_curves,
)

SCHEMES = [
    {"scheme": "itlinq", "eta": 0.7},
    {"scheme": "fair_itlinq"},
    {"scheme": "flashlinq"},
    {"scheme": "all_on"},
    {"scheme": "tdma"},
]


def sweep_cfg(**kw):
    raw = {"n_list": [1, 12], "trials": 6, "master_seed": 3, "schemes": SCHEMES}
    raw.update(kw)
    return build_config(raw, "iv-b")


def frac_cfg(**kw):
    raw = {"n_list": [1, 16], "trials": 5, "betas": [0.5, 2.0]}
    raw.update(kw)
    return build_config(raw, "iv-a")


def test_single_link_sum_rate_is_log2_one_plus_snr():
    cfg = sweep_cfg(trials=1, n_list=[1])
    res = run_sum_rate_sweep(cfg)
    _, s = draw_snr_table(cfg, 1, 0)
    want = math.log2(1 + s.snr[0])
    for sc in cfg.all_schemes:
        assert res.value(1, sc.name, "sum_rate_mean") == pytest.approx(want)
        assert res.row(1, sc.name, "sum_rate_mean").stderr == 0.0


def test_sweep_reproducible_and_seed_sensitive():
    a = run_sum_rate_sweep(sweep_cfg())
    assert a.to_csv() == run_sum_rate_sweep(sweep_cfg()).to_csv()
    assert a.to_csv() != run_sum_rate_sweep(sweep_cfg(master_seed=4)).to_csv()


def test_workers_do_not_change_results():
    for cfg in (sweep_cfg(trials=8), frac_cfg(fading=True, trials=4)):
        one = run_experiment(cfg)
        two = run_experiment(cfg.model_copy(update={"workers": 2}))
        assert one.to_csv() == two.to_csv()


def test_trial_results_do_not_depend_on_trial_count():
    # trial t draws the same drop regardless of how many trials run
    short = run_sum_rate_sweep(sweep_cfg(trials=2, n_list=[12])).samples
    long = run_sum_rate_sweep(sweep_cfg(trials=6, n_list=[12])).samples
    for key, v in short.items():
        assert np.array_equal(v, long[key][:2])


def test_sweep_rows_shape():
    res = run_sum_rate_sweep(sweep_cfg())
    assert all(r.stderr >= 0 for r in res.rows)
    keys = [(r.experiment, r.n, r.scheme, r.statistic) for r in res.rows]
    assert keys == sorted(keys)
    assert res.to_csv().splitlines()[0] == ",".join(CSV_COLUMNS)
    assert res.value(12, "all_on", "active_fraction") == 1.0
    assert res.value(12, "all_on", "global_itis_rate") <= 1.0
    with pytest.raises(KeyError):
        res.value(12, "tdma", "active_fraction")


def test_stderr_shrinks_like_inverse_sqrt_trials():
    small = run_sum_rate_sweep(sweep_cfg(trials=25, n_list=[16])).row(16, "itlinq(eta=0.7)", "sum_rate_mean")
    big = run_sum_rate_sweep(sweep_cfg(trials=400, n_list=[16])).row(16, "itlinq(eta=0.7)", "sum_rate_mean")
    ratio = small.stderr / big.stderr
    assert 2.5 < ratio < 6.5  # sqrt(16) = 4


def test_link_rate_cdf():
    cfg = sweep_cfg(experiment="link_rate_cdf", n_list=[10], trials=5, dump_link_rates=True)
    res = run_link_rate_cdf(cfg)
    for (n, name, kind), cdf in res.cdfs.items():
        assert cdf.p[-1] == 1.0
    assert len(res.link_rows) == 5 * 10 * 4  # tdma has no schedule rows
    assert 0 <= res.value(10, "all_on", "link_rate_below_0.1") <= 1
    with pytest.raises(ValueError):
        run_link_rate_cdf(sweep_cfg(experiment="link_rate_cdf"))


def test_link_rate_cdf_single_link_is_unit_step():
    cfg = sweep_cfg(experiment="link_rate_cdf", n_list=[1], trials=1, schemes=[{"scheme": "itlinq"}])
    cdf = run_link_rate_cdf(cfg).cdfs[(1, "itlinq(eta=0.7)", "sum_rate")]
    assert cdf.x.size == 1 and cdf.p.tolist() == [1.0]


def test_fraction_vs_n():
    res = run_fraction_vs_n(frac_cfg())
    for beta in ("0.5", "2"):
        assert res.value(1, f"beta={beta}/pathloss", "inv_kappa_mean") == 1.0
        assert 1 / 16 <= res.value(16, f"beta={beta}/pathloss", "inv_kappa_mean") <= 1
    assert res.value(16, "tdma", "lambda") == 1 / 16
    assert res.value(16, "beta=2/theory", "lambda") == 0.5


def test_fading_fraction_rows():
    res = run_experiment(frac_cfg(experiment="fading_fraction"))
    d = res.value(16, "beta=0.5/rayleigh-minus-pathloss", "inv_kappa_mean")
    a = res.value(16, "beta=0.5/rayleigh", "inv_kappa_mean")
    b = res.value(16, "beta=0.5/pathloss", "inv_kappa_mean")
    assert d == pytest.approx(a - b)


def test_fraction_covers_agree_in_bounds():
    for cover in ("exact_itis", "greedy_coloring"):
        res = run_fraction_vs_n(frac_cfg(cover=cover, n_list=[8], trials=3))
        assert 1 / 8 <= res.value(8, "beta=0.5/pathloss", "inv_kappa_mean") <= 1


def test_gap_nonnegative():
    res = run_gap_vs_n(frac_cfg(experiment="gap_vs_n"))
    assert all(r.value >= 0 for r in res.rows)
    assert res.value(1, "beta=0.5/pathloss", "gap_bits_mean") == pytest.approx(math.log2(3))


def test_theory_curves():
    cfg = build_config({"experiment": "theory_curves", "betas": [0.5, 1.5, 2.0], "n_list": [2, 8, 64, 512]})
    res = run_theory_curves(cfg)
    for n in (2, 8, 64, 512):
        assert res.value(n, "beta=0.5/theory", "lambda") == pytest.approx(n ** -0.5, rel=1e-15)
        assert res.value(n, "beta=2/theory", "lambda") == 0.5
        assert res.value(n, "beta=1.5/theory", "lambda") == pytest.approx(1 / 3)
        assert res.value(n, "tdma", "lambda") == 1 / n
    assert all(r.value <= 1 for r in res.rows if r.statistic == "lambda")


def test_disk_only_experiments_reject_square():
    with pytest.raises(ValueError):
        run_fraction_vs_n(sweep_cfg(experiment="fraction_vs_n"))


def test_sweep_needs_schemes():
    with pytest.raises(ValueError):
        run_sum_rate_sweep(build_config({"schemes": []}))


def test_config_errors():
    with pytest.raises(ValidationError):
        build_config({"trials": 0})
    with pytest.raises(ValidationError):
        build_config({"n_list": []})
    with pytest.raises(ValidationError):
        build_config({"trials": "10"})
    with pytest.raises(ValidationError):
        build_config({"bogus": 1})
    with pytest.raises(ValidationError):
        build_config({"schemes": [{"scheme": "itlinq"}, {"scheme": "itlinq"}]})
    with pytest.raises(KeyError):
        build_config({}, "no-such-preset")


def test_summary_json():
    cfg = sweep_cfg(trials=2)
    s = run_sum_rate_sweep(cfg).summary(cfg)
    assert s["config_hash"] == cfg.config_hash() and len(s["config_hash"]) == 16
    assert {"git_rev", "rows", "config"} <= set(s)


def test_schema_file_is_current():
    import json
    from pathlib import Path

    from itlinq.config import ExperimentConfig

    path = Path(__file__).resolve().parents[1] / "docs" / "config.schema.json"
    assert json.loads(path.read_text()) == ExperimentConfig.model_json_schema()
