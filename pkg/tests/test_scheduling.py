import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from itlinq.channel import SnrTable
from itlinq.scheduling import (
    FairItlinqParams,
    ItlinqParams,
    PriorityOrder,
    all_on_schedule,
    fair_itlinq_schedule,
    flashlinq_schedule,
    itlinq_schedule,
    random_priority,
    tdma_schedule,
)

from conftest import random_snr_table

M0 = ItlinqParams(eta=0.5, m_db=0.0)


def algorithm1_reference(snr, inr, perm, eta, m_db):
    """Line-by-line transcription of the distributed ITLinQ pseudo-code on
    re-indexed links (position 0 = highest priority)."""
    M = 10 ** (m_db / 10)
    n = len(perm)
    SNR = [snr[perm[a]] for a in range(n)]
    INR = [[inr[perm[a]][perm[b]] for b in range(n)] for a in range(n)]
    active = [0] * n
    active[0] = 1
    for j in range(1, n):
        S_j = [i for i in range(j) if active[i] == 1]
        flag_D = 1 if all(INR[j][i] <= M * SNR[j] ** eta for i in S_j) else 0
        flag_S = 1 if all(INR[i][j] <= M * SNR[j] ** eta for i in S_j) else 0
        active[j] = flag_D * flag_S
    out = np.zeros(n, dtype=bool)
    for a in range(n):
        out[perm[a]] = bool(active[a])
    return out


def two(snr, inr01, inr10):
    return SnrTable(snr, [[0, inr01], [inr10, 0]])


def test_random_priority():
    assert list(random_priority(1, np.random.default_rng(0)).perm) == [0]
    a = random_priority(20, np.random.default_rng(4)).perm
    b = random_priority(20, np.random.default_rng(4)).perm
    assert np.array_equal(a, b)


def test_random_priority_uniform():
    rng = np.random.default_rng(99)
    counts = {}
    for _ in range(60_000):
        key = tuple(random_priority(3, rng).perm)
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 6
    sigma = np.sqrt(60_000 * (1 / 6) * (5 / 6))
    assert all(abs(c - 10_000) < 3 * sigma for c in counts.values())


def test_priority_order_validation():
    with pytest.raises(ValueError):
        PriorityOrder([0, 0, 1])


# ---------------------------------------------------------------- ITLinQ

def test_itlinq_hand_traces():
    p = PriorityOrder.identity(2)
    assert itlinq_schedule(two([100, 100], 5, 5), p, M0).active.tolist() == [True, True]
    # inr[1][0] = 20 > 100**0.5 fails the destination check of link 1
    assert itlinq_schedule(two([100, 100], 5, 20), p, M0).active.tolist() == [True, False]
    assert itlinq_schedule(SnrTable([3.0], [[0.0]]), PriorityOrder.identity(1)).active.tolist() == [True]


def test_itlinq_source_check_uses_own_snr():
    # source of link 1 causes 20 at destination 0: compared against sqrt(snr[1]) = 100
    s = two([1e6, 1e4], 20, 1)
    assert itlinq_schedule(s, PriorityOrder.identity(2), M0).active.tolist() == [True, True]
    s = two([1e6, 100], 20, 1)
    assert itlinq_schedule(s, PriorityOrder.identity(2), M0).active.tolist() == [True, False]


def test_itlinq_margin_is_linear_multiplier():
    s = two([100, 100], 5, 100)
    p = PriorityOrder.identity(2)
    assert not itlinq_schedule(s, p, ItlinqParams(0.5, 0.0)).active[1]
    assert itlinq_schedule(s, p, ItlinqParams(0.5, 10.0)).active[1]  # 100 <= 10 * 10


def test_itlinq_matches_reference(rng):
    for _ in range(300):
        n = int(rng.integers(1, 25))
        s = random_snr_table(rng, n, snr_db=(10, 90), inr_db=(-10, 70))
        p = random_priority(n, rng)
        eta = float(rng.uniform(0.3, 1.0))
        m_db = float(rng.uniform(-10, 30))
        got = itlinq_schedule(s, p, ItlinqParams(eta, m_db)).active
        ref = algorithm1_reference(s.snr, s.inr, p.perm, eta, m_db)
        assert np.array_equal(got, ref)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(2, 30))
def test_itlinq_pairwise_tin_at_half(seed, n):
    r = np.random.default_rng(seed)
    s = random_snr_table(r, n, snr_db=(10, 90), inr_db=(-10, 60))
    p = random_priority(n, r)
    act = itlinq_schedule(s, p, M0).active
    on = [l for l in p.perm if act[l]]
    for a, i in enumerate(on):
        for j in on[a + 1:]:
            assert s.inr[j, i] <= np.sqrt(s.snr[j]) and s.inr[i, j] <= np.sqrt(s.snr[j])


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 30))
def test_top_priority_always_on(seed, n):
    r = np.random.default_rng(seed)
    s = random_snr_table(r, n)
    link = int(r.integers(n))
    rest = [l for l in r.permutation(n) if l != link]
    p = PriorityOrder([link] + rest)
    assert itlinq_schedule(s, p).active[link]
    assert fair_itlinq_schedule(s, p).active[link]
    assert flashlinq_schedule(s, p).active[link]


def test_itlinq_scale_invariant_at_eta_one(rng):
    params = ItlinqParams(1.0, 0.0)
    for _ in range(200):
        n = int(rng.integers(2, 20))
        s = random_snr_table(rng, n)
        p = random_priority(n, rng)
        base = itlinq_schedule(s, p, params).active
        for c in (2.0, 1024.0, 0.125):
            assert np.array_equal(itlinq_schedule(s.scaled(c), p, params).active, base)


def test_schedulers_do_not_mutate_and_are_deterministic(rng):
    s = random_snr_table(rng, 15)
    p = random_priority(15, rng)
    snr0, inr0 = s.snr.copy(), s.inr.copy()
    for fn in (itlinq_schedule, fair_itlinq_schedule, flashlinq_schedule):
        assert np.array_equal(fn(s, p).active, fn(s, p).active)
    assert np.array_equal(s.snr, snr0) and np.array_equal(s.inr, inr0)


def test_size_mismatch_rejected():
    with pytest.raises(ValueError):
        itlinq_schedule(two([1, 1], 0, 0), PriorityOrder.identity(3))


# ----------------------------------------------------------- Fair ITLinQ

def test_fair_equals_itlinq_below_threshold(rng):
    for _ in range(100):
        n = int(rng.integers(1, 20))
        s = random_snr_table(rng, n, snr_db=(0, 100))
        p = random_priority(n, rng)
        fair = fair_itlinq_schedule(s, p, FairItlinqParams(ItlinqParams(0.7, 25), snr_th_db=110))
        assert np.array_equal(fair.active, itlinq_schedule(s, p, ItlinqParams(0.7, 25)).active)


def test_fair_blocks_strong_link_in_sandwich():
    # snr[1] = 1e12 (120 dB). Thresholds for the source check of link 1:
    #   fair: 10**2 * 1e12**0.6 = 10**9.2,  plain: 10**2.5 * 1e12**0.7 = 10**10.9
    s = two([1e6, 1e12], 1e10, 1.0)
    p = PriorityOrder.identity(2)
    assert itlinq_schedule(s, p, ItlinqParams(0.7, 25)).active.tolist() == [True, True]
    assert fair_itlinq_schedule(s, p).active.tolist() == [True, False]
    assert fair_itlinq_schedule(SnrTable([1e13], [[0]]), PriorityOrder.identity(1)).active.tolist() == [True]


def test_fair_destination_check_unchanged_for_strong_links():
    # strong link with heavy incoming interference is blocked by both variants
    s = two([1e6, 1e12], 1.0, 1e12)
    p = PriorityOrder.identity(2)
    assert not itlinq_schedule(s, p).active[1]
    assert not fair_itlinq_schedule(s, p).active[1]


def test_fair_not_always_subset_counterexample():
    # link 1 is strong: ITLinQ admits it, Fair does not. Link 2 conflicts only
    # with link 1, so ITLinQ then blocks link 2 while Fair admits it.
    snr = [1e6, 1e12, 1e4]
    inr = [
        [0, 1e10, 1.0],
        [1.0, 0, 1.0],
        [1.0, 1e9, 0],
    ]
    s = SnrTable(snr, inr)
    p = PriorityOrder.identity(3)
    plain = itlinq_schedule(s, p, ItlinqParams(0.7, 25)).active
    fair = fair_itlinq_schedule(s, p).active
    assert plain.tolist() == [True, True, False]
    assert fair.tolist() == [True, False, True]


def test_fair_first_divergence_is_a_fair_block(rng):
    base = ItlinqParams(0.7, 25)
    fair_params = FairItlinqParams(base, snr_th_db=50, eta_bar=0.6, m_bar_db=20)
    diverged = 0
    for _ in range(500):
        n = int(rng.integers(2, 30))
        s = random_snr_table(rng, n, snr_db=(20, 80), inr_db=(0, 60))
        p = random_priority(n, rng)
        a = itlinq_schedule(s, p, base).active[p.perm]
        b = fair_itlinq_schedule(s, p, fair_params).active[p.perm]
        diff = np.flatnonzero(a != b)
        if diff.size:
            diverged += 1
            assert a[diff[0]] and not b[diff[0]]
    assert diverged > 50


def test_fair_params_validation():
    with pytest.raises(ValueError):
        FairItlinqParams(ItlinqParams(0.5, 25), eta_bar=0.6)


# -------------------------------------------------------------- FlashLinQ

def test_flashlinq_hand_traces():
    p = PriorityOrder.identity(2)
    assert flashlinq_schedule(SnrTable([1.0], [[0.0]]), PriorityOrder.identity(1)).active.tolist() == [True]
    assert flashlinq_schedule(two([100, 100], 1, 1), p).active.tolist() == [True, True]
    # source 1 hits destination 0 with 50: SIR 2 < 10**0.9
    assert flashlinq_schedule(two([100, 100], 50, 1), p).active.tolist() == [True, False]


def test_flashlinq_rx_sums_interference():
    # each interferer alone leaves SIR 10 >= 7.94; together SIR 5 fails
    s = SnrTable([1e6, 1e6, 100], [[0, 0, 1], [0, 0, 1], [10, 10, 0]])
    p = PriorityOrder.identity(3)
    assert flashlinq_schedule(s, p).active.tolist() == [True, True, False]
    assert flashlinq_schedule(s, p, rx_aggregate="max").active.tolist() == [True, True, True]


def test_flashlinq_threshold_equality_admits():
    g = 10 ** 0.9
    s = two([100 * g, 100 * g], 100, 100)
    assert flashlinq_schedule(s, PriorityOrder.identity(2)).active.all()


# -------------------------------------------------------------- baselines

def test_tdma_and_all_on():
    assert tdma_schedule(5, 0).active.tolist() == [True, False, False, False, False]
    counts = sum(tdma_schedule(4, k).active.astype(int) for k in range(4))
    assert counts.tolist() == [1, 1, 1, 1]
    assert tdma_schedule(1, 0).active.tolist() == [True]
    with pytest.raises(IndexError):
        tdma_schedule(3, 3)
    assert all_on_schedule(3).active.tolist() == [True, True, True]
    assert all_on_schedule(7).active.sum() == 7
