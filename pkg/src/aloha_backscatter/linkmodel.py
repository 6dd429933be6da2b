"""Per-link SINR/SNR, rates, slotted-ALOHA success probability, fairness."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BeamPair:
    """Receive beams at the AP for one BD: ``v_a`` decodes the AD, ``v_b`` the BD."""

    v_a: np.ndarray
    v_b: np.ndarray

    def __post_init__(self):
        for name in ("v_a", "v_b"):
            if abs(np.linalg.norm(getattr(self, name)) - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit norm")


def _gain(v, h):
    return float(np.abs(np.vdot(v, h)) ** 2)


def sinr_ad(v_a, h_d, h_b, h_f_gain, alpha, p, sigma_w2):
    """SINR of the active signal, the backscattered signal counting as interference."""
    return _gain(v_a, h_d) * p / (alpha * h_f_gain * _gain(v_a, h_b) * p + sigma_w2)


def snr_bd(v_b, h_b, h_f_gain, alpha, p, sigma_w2):
    """SNR of the backscattered signal once the direct link is cancelled."""
    return alpha * h_f_gain * _gain(v_b, h_b) * p / sigma_w2


def rate(x):
    """Shannon rate ``log2(1 + x)`` in bits/s/Hz."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("SINR must be non-negative")
    out = np.log1p(x) / np.log(2.0)
    return float(out) if out.ndim == 0 else out


def success_probs(q):
    """``Pr(n) = q_n * prod_{j != n} (1 - q_j)`` for every n at once."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    factors = np.where(np.eye(n, dtype=bool), q[None, :], 1.0 - q[None, :])
    return np.prod(factors, axis=1)


def success_prob(q, n):
    q = np.asarray(q, dtype=float)
    if not 0 <= n < q.shape[0]:
        raise IndexError(f"BD index {n} out of range for N={q.shape[0]}")
    return float(success_probs(q)[n])


def avg_throughput_bd(q, n, rate_n):
    return success_prob(q, n) * rate_n


def jain_fi(values):
    """Jain's fairness index ``(sum v)^2 / (N sum v^2)``."""
    v = np.asarray(values, dtype=float)
    if np.any(v < 0):
        raise ValueError("values must be non-negative")
    s2 = float(np.sum(v * v))
    if s2 == 0:
        raise ValueError("Jain's index is undefined for an all-zero vector")
    # rounding can push equal entries a hair above 1
    return min(float(np.sum(v)) ** 2 / (v.size * s2), 1.0)
