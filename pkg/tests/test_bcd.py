import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aloha_backscatter.bcd import greedy_tas, initial_alpha, inner_bcd
from aloha_backscatter.cap import EPS
from aloha_backscatter.channel import ChannelRealization, trial_channels
from aloha_backscatter.config import SystemConfig
from aloha_backscatter.energy import eh_inverse
from aloha_backscatter.powerrc import InfeasibleError


def single_link(h_f=0.1, h_d=1e-2, h_b=0.1):
    return ChannelRealization(np.array([[h_f]], complex), np.array([[h_d]], complex),
                              np.array([[h_b]], complex))


def test_single_bd_closed_form():
    cfg = SystemConfig(M=1, N=1, K=1)
    ch = single_link()
    state = inner_bcd(ch, cfg, 0)
    g, d2, b2 = 0.01, 1e-4, 1e-2
    alpha_ad = (d2 * 1.0 - cfg.sigma_w2) / (b2 * g * 1.0)
    alpha_eh = 1 - eh_inverse(1e-3, cfg.eh[0]) / g
    alpha = min(alpha_ad, alpha_eh, 1.0)
    expected = (1 - EPS) * math.log2(1 + alpha * g * b2 / cfg.sigma_w2)
    assert state.iterations <= 3
    assert state.alpha[0] == pytest.approx(alpha, rel=1e-12)
    assert state.t == pytest.approx(expected, rel=1e-12)
    assert state.q[0] == pytest.approx(1 - EPS)


def test_ad_limited_single_bd():
    cfg = SystemConfig(M=1, N=1, K=1)
    ch = single_link(h_d=3e-3)  # weak direct link: AD QoS binds before the harvester
    state = inner_bcd(ch, cfg, 0)
    alpha_ad = (9e-6 - cfg.sigma_w2) / (1e-2 * 0.01)
    assert alpha_ad < 1 - eh_inverse(1e-3, cfg.eh[0]) / 0.01
    assert state.alpha[0] == pytest.approx(alpha_ad, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), trial=st.integers(0, 1000))
def test_trace_monotone_and_invariants(seed, trial):
    cfg = SystemConfig(seed=seed)
    ch = trial_channels(cfg, trial)[1]
    try:
        state = greedy_tas(ch, cfg)
    except InfeasibleError:
        return
    chain = state.flat_trace()
    assert all(b >= a - 1e-9 for a, b in zip(chain, chain[1:]))
    assert np.all((state.alpha > 0) & (state.alpha <= 1))
    assert np.all((state.q > 0) & (state.q < 1))
    assert np.allclose(np.linalg.norm(state.v_a, axis=1), 1, atol=1e-12)
    assert np.allclose(np.linalg.norm(state.v_b, axis=1), 1, atol=1e-12)
    assert state.t == pytest.approx(np.min(state.throughputs), rel=1e-9)
    assert state.t == pytest.approx(max(state.per_antenna.values()))


def test_greedy_with_one_antenna_is_inner():
    cfg = SystemConfig(M=1)
    ch = trial_channels(cfg, 0)[1]
    a, b = greedy_tas(ch, cfg), inner_bcd(ch, cfg, 0)
    assert a.m == 0 and a.t == b.t and np.array_equal(a.q, b.q)


def test_strong_antenna_selected():
    cfg = SystemConfig()
    ch = trial_channels(cfg, 2)[1]
    for m in range(cfg.M):
        h_f = ch.h_f.copy()
        h_f[m] *= 10
        boosted = ChannelRealization(h_f, ch.h_d, ch.h_b)
        assert greedy_tas(boosted, cfg).m == m


def test_tie_goes_to_lowest_index():
    cfg = SystemConfig()
    ch = trial_channels(cfg, 0)[1]
    same = ChannelRealization(np.tile(ch.h_f[2], (4, 1)), np.tile(ch.h_d[2], (4, 1)), ch.h_b)
    state = greedy_tas(same, cfg)
    assert state.m == 0
    assert len(set(state.per_antenna.values())) == 1


def test_deterministic():
    cfg = SystemConfig(seed=9)
    a = greedy_tas(trial_channels(cfg, 5)[1], cfg)
    b = greedy_tas(trial_channels(cfg, 5)[1], cfg)
    assert a.t == b.t and a.m == b.m and np.array_equal(a.alpha, b.alpha) and a.trace == b.trace


def test_infeasible_everywhere():
    cfg = SystemConfig(p_max=1e-4)
    with pytest.raises(InfeasibleError):
        greedy_tas(trial_channels(cfg, 0)[1], cfg)


def test_initial_alpha_respects_ad_target():
    cfg = SystemConfig(r_min=6.0)
    ch = trial_channels(cfg, 1)[1]
    try:
        alpha = initial_alpha(ch, 0, cfg)
    except InfeasibleError:
        pytest.skip("antenna infeasible at this target")
    g = np.abs(ch.h_f[0]) ** 2
    assert np.all(alpha <= np.minimum(1 - cfg.phi_inv_circuit / (cfg.p_max * g), 1) / 2 + 1e-15)


def test_default_convergence_is_fast():
    cfg = SystemConfig()
    iters = [greedy_tas(trial_channels(cfg, t)[1], cfg).iterations for t in range(20)]
    assert np.median(iters) <= 5
