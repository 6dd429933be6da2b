import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aloha_backscatter.config import SystemConfig
from aloha_backscatter.linkmodel import success_probs
from aloha_backscatter.montecarlo import (
    AllInfeasibleError, aggregate, run_trials, simulate_access, solve_trial,
)


def test_simulate_access_edge_cases():
    rng = np.random.default_rng(0)
    assert np.array_equal(simulate_access([1.0, 0.0], [3.0, 5.0], 10_000, rng), [3.0, 0.0])
    assert np.array_equal(simulate_access([1.0, 1.0], [3.0, 5.0], 1000, rng), [0.0, 0.0])
    with pytest.raises(ValueError):
        simulate_access([0.5], [1.0], 0, rng)


def test_simulate_access_symmetric():
    out = simulate_access([0.5, 0.5], [2.0, 2.0], 100_000, np.random.default_rng(1))
    assert np.all(np.abs(out / 0.5 - 1) < 0.02)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5))
def test_empirical_matches_analytic(seed, n):
    rng = np.random.default_rng(seed)
    q = rng.uniform(0.1, 0.5, n)
    q *= min(1.0, 0.9 / q.sum())
    rbar = rng.uniform(1, 10, n)
    emp = simulate_access(q, rbar, 100_000, rng)
    pr = success_probs(q)
    ana = pr * rbar
    # five binomial standard deviations of the success count
    tol = 5 * np.sqrt((1 - pr) / (pr * 100_000))
    assert np.all(np.abs(emp - ana) / ana < tol)


def test_single_trial_single_algorithm():
    agg, reports = run_trials(SystemConfig(), ["proposed"], trials=1)
    assert len(reports) == 1 and reports[0].feasible
    assert math.isnan(agg.stats["proposed"].ci_halfwidth)
    assert 0 < reports[0].jain_fi <= 1


def test_same_seed_same_aggregate():
    cfg = SystemConfig(seed=42)
    a, _ = run_trials(cfg, ["proposed", "rtas"], trials=4)
    b, _ = run_trials(cfg, ["proposed", "rtas"], trials=4)
    assert a == b


def test_pairing_is_independent_of_algorithm_set():
    cfg = SystemConfig(seed=3)
    alone = solve_trial(cfg, 2, ["rtas"])[0]
    mixed = [r for r in solve_trial(cfg, 2, ["proposed", "ecap", "rtas"]) if r.algorithm == "rtas"][0]
    assert alone.objective == mixed.objective and alone.antenna == mixed.antenna


def test_all_infeasible_raises():
    with pytest.raises(AllInfeasibleError):
        run_trials(SystemConfig(p_max=1e-4), ["proposed", "ecap"], trials=2)


def test_infeasible_trials_recorded_not_resampled():
    _, reports = run_trials(SystemConfig(p_max=0.2), ["proposed"], trials=6)
    assert len(reports) == 6


def test_aggregation_order_free():
    cfg = SystemConfig(seed=5)
    _, reports = run_trials(cfg, ["proposed", "ecap"], trials=5)
    shuffled = reports[:]
    random.Random(0).shuffle(shuffled)
    a = aggregate(reports, ["proposed", "ecap"])
    b = aggregate(shuffled, ["proposed", "ecap"])
    for k in a.stats:
        for field in ("mean_objective", "median_objective", "mean_jain_fi", "feasible_rate"):
            assert getattr(a.stats[k], field) == pytest.approx(getattr(b.stats[k], field), rel=1e-12)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        run_trials(SystemConfig(), ["greedy"], trials=1)
