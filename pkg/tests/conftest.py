import math

import numpy as np
import pytest

from aloha_backscatter.channel import ChannelRealization, trial_channels
from aloha_backscatter.config import EHParams, SystemConfig


@pytest.fixture
def cfg():
    return SystemConfig()


@pytest.fixture
def default_channels(cfg):
    return [trial_channels(cfg, t)[1] for t in range(8)]


def literal_phi(p, e: EHParams):
    """Harvester output in its textbook form, evaluated term by term."""
    big = math.exp(-e.a * e.p_se + e.b)
    val = e.p_sa / big * ((1.0 + big) / (1.0 + math.exp(-e.a * p + e.b)) - 1.0)
    return max(val, 0.0)


def literal_phi_inv(x, e: EHParams):
    big = math.exp(-e.a * e.p_se + e.b)
    B = big / e.p_sa
    A = (1.0 + big) / (B * x + 1.0) - 1.0
    return max((e.b - math.log(A)) / e.a, 0.0)


def random_unit(rng, K, count):
    z = rng.standard_normal((count, K)) + 1j * rng.standard_normal((count, K))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def random_channels(rng, M=2, N=2, K=2, scale=(0.05, 0.01, 0.05)):
    return ChannelRealization(
        math.sqrt(scale[0]) * crandn(rng, M, N),
        math.sqrt(scale[1]) * crandn(rng, M, K),
        math.sqrt(scale[2]) * crandn(rng, N, K),
    )
