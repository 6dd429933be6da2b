"""Closed-form transmit power and reflection coefficients for fixed beams and CAPs.

With the beams fixed, every BD's average throughput grows with both ``P`` and
``alpha``, so the transmit power sits at ``p_max`` and each RC is pushed up to
the tighter of two ceilings: the AD QoS (``alpha_ad``) and the circuit-power
requirement at the BD (``alpha_eh``).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .energy import SaturationError, eh_inverse
from .linkmodel import success_probs


class InfeasibleError(RuntimeError):
    """The QoS / energy constraints cannot be met."""


@dataclass(frozen=True)
class RcSolution:
    alpha: np.ndarray
    alpha_ad: np.ndarray  # uncapped AD-QoS ceiling (inf when the AD is never limiting)
    alpha_eh: np.ndarray
    p: float
    p_min: np.ndarray
    feasible_bd: np.ndarray
    # inputs carried for the subproblem value
    trd: np.ndarray
    trb: np.ndarray
    h_f_gain: np.ndarray
    phi_inv: np.ndarray
    gamma: float

    @property
    def feasible(self) -> bool:
        return bool(np.all(self.feasible_bd))


def circuit_input_power(eh, p_circuit):
    """Per-BD RF input needed to run the circuit; raises if it is beyond saturation."""
    try:
        return np.array([eh_inverse(pc, e) for e, pc in zip(eh, p_circuit)])
    except SaturationError as exc:
        raise InfeasibleError(f"circuit power unreachable: {exc}") from None


def min_power(h_f_gain, trd, eh, p_circuit, r_min, sigma_w2):
    """Per-BD minimum AD transmit power (at ``alpha = 0``) and the overall floor."""
    h_f_gain = np.asarray(h_f_gain, float)
    trd = np.asarray(trd, float)
    if np.any(trd <= 0):
        raise ValueError("Tr(H_d V) must be positive")
    phi_inv = circuit_input_power(eh, p_circuit)
    gamma = 2.0 ** r_min - 1.0
    p_min = np.maximum(phi_inv / h_f_gain, gamma * sigma_w2 / trd)
    return p_min, float(np.max(p_min))


def optimal_power(p_max, floor):
    if not p_max > floor:
        raise InfeasibleError(f"p_max={p_max:.6g} W does not exceed the power floor {floor:.6g} W")
    return float(p_max)


def optimal_rc(trd, trb, h_f_gain, p_max, r_min, sigma_w2, eh, p_circuit):
    """Optimal RCs at ``P = p_max`` for the given beam gains.

    ``trd[n] = |v_a^H h_d|^2`` and ``trb[n] = |v_a^H h_b[n]|^2`` for the AD beam
    used while BD n is accessed.
    """
    trd = np.asarray(trd, float)
    trb = np.asarray(trb, float)
    g = np.asarray(h_f_gain, float)
    gamma = 2.0 ** r_min - 1.0
    p_min, floor = min_power(g, trd, eh, p_circuit, r_min, sigma_w2)
    phi_inv = circuit_input_power(eh, p_circuit)

    denom = gamma * trb * g * p_max
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha_ad = np.where(denom > 0, (trd * p_max - gamma * sigma_w2) / denom, np.inf)
    alpha_eh = 1.0 - phi_inv / (p_max * g)
    alpha = np.clip(np.minimum(np.minimum(alpha_ad, alpha_eh), 1.0), 0.0, None)
    feasible_bd = (alpha > 0) & (p_max > p_min)
    return RcSolution(alpha, alpha_ad, alpha_eh, float(p_max), p_min, feasible_bd,
                      trd, trb, g, phi_inv, gamma)


def subproblem_value(rc: RcSolution, hb_norm2, q, sigma_w2):
    """Per-BD value ``Pr(n) * r_n`` at the closed-form optimum and its minimum.

    Uses the two explicit branches (AD-limited and EH-limited) rather than
    re-evaluating the rate at ``rc.alpha``; a BD whose RC clamps to zero
    contributes zero.
    """
    hb2 = np.asarray(hb_norm2, float)
    pr = success_probs(q)
    g, p = rc.h_f_gain, rc.p
    t_n = np.zeros_like(hb2)
    for n in range(hb2.shape[0]):
        if rc.alpha[n] <= 0:
            continue
        if rc.alpha_ad[n] < rc.alpha_eh[n]:
            snr = (rc.trd[n] * p - rc.gamma * sigma_w2) / (rc.gamma * rc.trb[n] * sigma_w2) * hb2[n]
        else:
            snr = (g[n] * hb2[n] * p - hb2[n] * rc.phi_inv[n]) / sigma_w2
        t_n[n] = pr[n] * np.log2(1.0 + snr)
    return float(np.min(t_n)), t_n


def rc_oracle_grid(trd, trb, h_f_gain, hb_norm2, q, p_max, floor, r_min, sigma_w2, eh, p_circuit,
                   alpha_step=1e-4, p_points=101):
    """Brute-force ``max_{alpha, P} min_n Pr(n) r_n`` over a grid.

    Feasibility is checked with the forward harvester model (not its inverse)
    and the AD QoS inequality at the given beam gains.  Returns
    ``(p, alpha, value)``; ``value < 0`` means no grid point is feasible.
    """
    p_grid = np.linspace(floor, p_max, p_points)
    alpha_grid = np.linspace(0.0, 1.0, int(round(1.0 / alpha_step)) + 1)
    f = lambda xs: np.ascontiguousarray(np.asarray(xs, dtype=np.float64))
    return _kernels.rc_grid(
        f(trd), f(trb), f(h_f_gain), f(hb_norm2), f(success_probs(q)),
        f([e.a for e in eh]), f([e.p_se for e in eh]), f([e.p_sa for e in eh]),
        f([e.offset for e in eh]), f(p_circuit), float(2.0 ** r_min - 1.0), float(sigma_w2),
        f(p_grid), f(alpha_grid),
    )
