import numpy as np
import pytest

from aloha_backscatter.bcd import greedy_tas
from aloha_backscatter.benchmarks import (
    BenchmarkConfig, solve_ecap, solve_frc, solve_rtas, solve_tc, solve_tdma, tdma_allocate,
)
from aloha_backscatter.cap import EPS
from aloha_backscatter.channel import ChannelRealization, trial_channels
from aloha_backscatter.config import SystemConfig
from aloha_backscatter.powerrc import InfeasibleError


@pytest.fixture
def symmetric():
    cfg = SystemConfig(N=3)
    ch = trial_channels(cfg, 0)[1]
    h_f = np.tile(ch.h_f[:, :1], (1, 3))
    h_b = np.tile(ch.h_b[:1], (3, 1))
    return cfg, ChannelRealization(h_f, ch.h_d, h_b)


def test_benchmark_config_validation():
    with pytest.raises(ValueError):
        BenchmarkConfig(frc_alpha=0.0)
    assert BenchmarkConfig.from_config(SystemConfig(frc_alpha=0.5)).frc_alpha == 0.5


def test_ecap_single_bd_and_symmetric(symmetric):
    cfg1 = SystemConfig(N=1)
    ch1 = trial_channels(cfg1, 0)[1]
    assert solve_ecap(ch1, cfg1).t == pytest.approx(greedy_tas(ch1, cfg1).t, rel=1e-5)
    cfg, ch = symmetric
    assert solve_ecap(ch, cfg).t == pytest.approx(greedy_tas(ch, cfg).t, abs=1e-3)


def test_restrictions_never_win():
    cfg = SystemConfig()
    for t in range(6):
        ch = trial_channels(cfg, t)[1]
        best = greedy_tas(ch, cfg).t
        assert solve_ecap(ch, cfg).t <= best + 1e-9
        try:
            assert solve_frc(ch, cfg).t <= best + 1e-9
        except InfeasibleError:
            pass


def test_frc_at_proposed_alpha(symmetric):
    cfg, ch = symmetric
    prop = greedy_tas(ch, cfg)
    assert np.allclose(prop.alpha, prop.alpha[0])
    frc = solve_frc(ch, cfg, BenchmarkConfig(frc_alpha=float(prop.alpha[0])))
    assert frc.t == pytest.approx(prop.t, rel=1e-9)


def test_frc_infeasible_above_harvester_bound():
    cfg = SystemConfig()
    with pytest.raises(InfeasibleError):
        solve_frc(trial_channels(cfg, 0)[1], cfg, BenchmarkConfig(frc_alpha=1.0))


def test_rtas():
    cfg1 = SystemConfig(M=1)
    ch1 = trial_channels(cfg1, 0)[1]
    assert solve_rtas(ch1, cfg1, np.random.default_rng(0)).t == greedy_tas(ch1, cfg1).t
    cfg = SystemConfig()
    ch = trial_channels(cfg, 0)[1]
    a = solve_rtas(ch, cfg, np.random.default_rng(3))
    b = solve_rtas(ch, cfg, np.random.default_rng(3))
    assert a.m == b.m and a.t == b.t
    draws = [solve_rtas(ch, cfg, np.random.default_rng(s)).t for s in range(30)]
    assert np.mean(draws) <= greedy_tas(ch, cfg).t + 1e-12


def test_tdma_allocation_cases():
    sol = tdma_allocate([2.0, 2.0], [5.0, 5.0], 1.0)
    assert np.allclose(sol.tau, 0.5) and sol.t == pytest.approx(1.0)
    r = np.array([1.0, 2.0, 5.0])
    sol = tdma_allocate(r, [9.0, 9.0, 9.0], 1.0)
    assert sol.t == pytest.approx(1 / np.sum(1 / r))
    assert np.allclose(sol.tau, sol.t / r)
    with pytest.raises(InfeasibleError):
        tdma_allocate(r, [0.5, 0.5, 0.5], 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_tdma_tight_against_grid(seed):
    rng = np.random.default_rng(seed)
    r = rng.uniform(1, 10, 2)
    r_ad = np.array([rng.uniform(0.2, 0.9), rng.uniform(1.2, 3.0)])
    r_min = 1.0
    sol = tdma_allocate(r, r_ad, r_min)
    tau1 = np.linspace(0, 1, 10_001)
    tau = np.column_stack((tau1, 1 - tau1))
    ok = tau @ r_ad >= r_min
    oracle = np.max(np.min(tau[ok] * r, axis=1))
    assert abs(sol.t - oracle) < 1e-3
    assert np.sum(sol.tau) == pytest.approx(1.0, abs=1e-9)
    assert sol.tau @ r_ad >= r_min - 1e-9


def test_solve_tdma_consistent():
    cfg = SystemConfig()
    state, sol = solve_tdma(trial_channels(cfg, 0)[1], cfg)
    assert np.sum(sol.tau) == pytest.approx(1.0)
    assert state.t == pytest.approx(np.min(sol.tau * state.rbar), rel=1e-9)


def test_tc_single_bd_matches_proposed():
    cfg = SystemConfig(N=1)
    ch = trial_channels(cfg, 1)[1]
    tc = solve_tc(ch, cfg)
    prop = greedy_tas(ch, cfg)
    assert tc.t == pytest.approx(prop.t / (1 - EPS), rel=1e-6)


def test_tc_parallel_backscatter_collapses():
    cfg = SystemConfig(N=2)
    ch = trial_channels(cfg, 0)[1]
    h_b = np.vstack((ch.h_b[0], ch.h_b[0] * (1 + 1e-3)))
    par = ChannelRealization(ch.h_f, ch.h_d, h_b)
    tc = solve_tc(par, cfg)
    prop = greedy_tas(par, cfg)
    assert np.max(tc.rbar) < 0.2 * np.min(prop.rbar)


def test_tc_below_accessed_rate():
    cfg = SystemConfig()
    for t in range(3):
        ch = trial_channels(cfg, t)[1]
        assert solve_tc(ch, cfg).t <= np.min(greedy_tas(ch, cfg).rbar)
