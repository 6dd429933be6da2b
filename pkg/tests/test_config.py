import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aloha_backscatter.config import (
    ConfigError, SystemConfig, config_from_dict, parse_config, render_config,
)


def test_empty_document_gives_defaults():
    cfg = parse_config("")
    assert cfg == SystemConfig()
    assert (cfg.M, cfg.N, cfg.K) == (4, 4, 4)
    assert cfg.p_max == 1.0 and cfg.r_min == 1.0
    assert cfg.p_circuit == (1e-3,) * 4
    assert cfg.sigma_w2 == 1e-8
    assert cfg.path_loss_exponent == 2.2 and cfg.rician_factor_db == 2.8
    assert cfg.omega_th == cfg.phi_th == cfg.eps_th == 1e-3
    assert cfg.max_iter_a1 == cfg.max_iter_a2 == cfg.max_iter_a3 == 1000
    assert cfg.eh[0].a == 274 and cfg.eh[0].b == 0.29
    assert cfg.eh[0].p_se == 6.4e-5 and cfg.eh[0].p_sa == 4.927e-3


def test_rician_factor_converted_to_linear():
    assert SystemConfig().rician_k == pytest.approx(10 ** 0.28)


def test_negative_power_names_the_key():
    with pytest.raises(ConfigError, match="p_max must be positive"):
        parse_config('{"p_max": -1}')


def test_override_semantics():
    cfg = parse_config('{"N": 8, "K": 2}')
    assert (cfg.N, cfg.K, cfg.M) == (8, 2, 4)
    assert len(cfg.eh) == 8 and len(cfg.p_circuit) == 8


@pytest.mark.parametrize("text, match", [
    ('{"nope": 1}', "unknown config key"),
    ("{not json", "malformed"),
    ("[1, 2]", "JSON object"),
    ('{"M": 0}', "M"),
    ('{"eps_th": 1.5}', "eps_th"),
    ('{"p_circuit": [1e-3, 1e-3]}', "p_circuit must have length"),
    ('{"sigma_w2": "x"}', "sigma_w2"),
])
def test_rejections(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_per_bd_arrays():
    cfg = parse_config('{"N": 2, "p_circuit": [1e-3, 2e-3], "eh_a": [274, 300]}')
    assert cfg.p_circuit == (1e-3, 2e-3)
    assert [e.a for e in cfg.eh] == [274, 300]
    assert parse_config(render_config(cfg)) == cfg


def test_default_round_trip():
    cfg = SystemConfig()
    assert parse_config(render_config(cfg)) == cfg


@settings(max_examples=60, deadline=None)
@given(
    N=st.integers(1, 6),
    K=st.integers(1, 6),
    p_max=st.floats(1e-3, 1e3),
    r_min=st.floats(0.0, 5.0),
    sigma=st.floats(1e-12, 1e-4),
    seed=st.integers(0, 2**63),
    pc=st.floats(1e-6, 4e-3),
)
def test_round_trip_property(N, K, p_max, r_min, sigma, seed, pc):
    cfg = config_from_dict({"N": N, "K": K, "p_max": p_max, "r_min": r_min,
                            "sigma_w2": sigma, "seed": seed, "p_circuit": pc})
    again = parse_config(render_config(cfg))
    assert again == cfg
    assert json.loads(render_config(again)) == json.loads(render_config(cfg))
