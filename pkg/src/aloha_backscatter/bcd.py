"""Block-coordinate descent over (beams, power/RC, CAPs) with antenna search.

Each inner iteration runs the three blocks in order -- receive beams, then
the closed-form power and RCs, then the access probabilities -- and records
the objective after each block as ``(t, t_bar, t_hat)``.  The outer loop
repeats the inner solve for every transmit antenna and keeps the best one.
"""

from dataclasses import dataclass, field

import numpy as np

from .beamforming import active_beam, mrc
from .cap import EPS, solve_cap
from .config import SystemConfig
from .linkmodel import rate, success_probs
from .powerrc import InfeasibleError, optimal_power, optimal_rc, subproblem_value, min_power


class BcdConvergenceError(RuntimeError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass
class SolveState:
    m: int
    p: float
    alpha: np.ndarray
    q: np.ndarray
    v_a: np.ndarray  # (N, K) AD beam used while BD n is accessed
    v_b: np.ndarray  # (N, K)
    t: float
    rbar: np.ndarray  # per-BD rate when accessed
    trace: list = field(default_factory=list)  # [(t, t_bar, t_hat), ...]
    iterations: int = 0
    per_antenna: dict = field(default_factory=dict)  # m -> converged t (feasible antennas)

    @property
    def throughputs(self):
        """Per-BD average throughput ``Pr(n) * r_n``."""
        return success_probs(self.q) * self.rbar

    def flat_trace(self):
        return [x for triple in self.trace for x in triple]


def _rates(channels, m, alpha, p, sigma_w2):
    g = np.abs(channels.h_f[m]) ** 2
    hb2 = np.sum(np.abs(channels.h_b) ** 2, axis=1)
    return rate(alpha * g * hb2 * p / sigma_w2)


def _ad_beams(channels, m, alpha, p, cfg):
    g = np.abs(channels.h_f[m]) ** 2
    N, K = channels.N, channels.K
    v_a = np.empty((N, K), dtype=complex)
    margin = np.empty(N)
    for n in range(N):
        v_a[n], diag = active_beam(channels.h_d[m], channels.h_b[n], g[n], alpha[n], p,
                                   cfg.sigma_w2, cfg.r_min)
        margin[n] = diag.c3_margin
    return v_a, margin


def beam_gains(channels, m, v_a):
    """``(|v_a^H h_d|^2, |v_a^H h_b[n]|^2)`` per BD."""
    trd = np.abs(np.einsum("nk,k->n", v_a.conj(), channels.h_d[m])) ** 2
    trb = np.abs(np.einsum("nk,nk->n", v_a.conj(), channels.h_b)) ** 2
    return trd, trb


def initial_alpha(channels, m, cfg: SystemConfig):
    """Feasible starting RCs: half the EH ceiling, halved further until the AD QoS holds.

    Raises :class:`InfeasibleError` if antenna ``m`` cannot meet the
    constraints at all.
    """
    g = np.abs(channels.h_f[m]) ** 2
    phi_inv = cfg.phi_inv_circuit
    alpha_eh = 1.0 - phi_inv / (cfg.p_max * g)
    if np.any(alpha_eh <= 0):
        raise InfeasibleError(f"antenna {m}: harvested power cannot cover the circuit at p_max")
    alpha = np.minimum(alpha_eh, 1.0) / 2.0
    for _ in range(60):
        _, margin = _ad_beams(channels, m, alpha, cfg.p_max, cfg)
        if np.all(margin >= 0):
            return alpha
        alpha = np.where(margin < 0, alpha / 2.0, alpha)
    raise InfeasibleError(f"antenna {m}: AD rate target unreachable")


def inner_bcd(channels, cfg: SystemConfig, m, *, q_fixed=None, alpha_fixed=None):
    """Alternate the three blocks on antenna ``m`` until the objectives agree.

    ``q_fixed`` bypasses the CAP block (equal-CAP benchmark) and
    ``alpha_fixed`` replaces the closed-form RCs with a constant (fixed-RC
    benchmark, checked for feasibility).
    """
    N = channels.N
    g = np.abs(channels.h_f[m]) ** 2
    hb2 = np.sum(np.abs(channels.h_b) ** 2, axis=1)
    p = cfg.p_max
    v_b = np.array([mrc(h) for h in channels.h_b])

    if alpha_fixed is not None:
        alpha = np.full(N, float(alpha_fixed))
    else:
        alpha = initial_alpha(channels, m, cfg)
    if q_fixed is not None:
        q = np.clip(np.broadcast_to(np.asarray(q_fixed, float), (N,)).copy(), EPS, 1 - EPS)
    else:
        q = np.clip(np.full(N, 1.0 / N), EPS, 1 - EPS)

    trace = []
    rbar = _rates(channels, m, alpha, p, cfg.sigma_w2)
    for it in range(1, cfg.max_iter_a3 + 1):
        # block 1: beams (MRC for the BD, max-SINR for the AD)
        v_a, margin = _ad_beams(channels, m, alpha, p, cfg)
        t = float(np.min(success_probs(q) * rbar))

        # block 2: power and RCs
        trd, trb = beam_gains(channels, m, v_a)
        if alpha_fixed is not None:
            _, floor = min_power(g, trd, cfg.eh, cfg.p_circuit, cfg.r_min, cfg.sigma_w2)
            p = optimal_power(cfg.p_max, floor)
            if np.any(margin < 0):
                raise InfeasibleError(f"antenna {m}: fixed RC violates the AD rate target")
            if np.any(alpha > 1.0 - cfg.phi_inv_circuit / (p * g)):
                raise InfeasibleError(f"antenna {m}: fixed RC starves the harvester")
            rbar = _rates(channels, m, alpha, p, cfg.sigma_w2)
            t_bar = float(np.min(success_probs(q) * rbar))
        else:
            rc = optimal_rc(trd, trb, g, cfg.p_max, cfg.r_min, cfg.sigma_w2, cfg.eh, cfg.p_circuit)
            p = optimal_power(cfg.p_max, float(np.max(rc.p_min)))
            if not rc.feasible:
                raise InfeasibleError(f"antenna {m}: some BD is left with a zero RC")
            alpha = rc.alpha
            t_bar, _ = subproblem_value(rc, hb2, q, cfg.sigma_w2)
            rbar = _rates(channels, m, alpha, p, cfg.sigma_w2)

        # block 3: access probabilities
        if q_fixed is None:
            sol = solve_cap(rbar, tol=cfg.phi_th, max_iter=cfg.max_iter_a2)
            q = sol.q
            t_hat = sol.t_hat
        else:
            t_hat = float(np.min(success_probs(q) * rbar))

        trace.append((t, t_bar, t_hat))
        if abs(t - t_bar) <= cfg.eps_th and abs(t - t_hat) <= cfg.eps_th:
            break
    else:
        raise BcdConvergenceError(f"antenna {m}: no convergence in {cfg.max_iter_a3} iterations", trace)

    # the AD beam that goes with the final RCs
    v_a, _ = _ad_beams(channels, m, alpha, p, cfg)
    return SolveState(m=m, p=p, alpha=np.asarray(alpha, float), q=q, v_a=v_a, v_b=v_b,
                      t=t_hat, rbar=rbar, trace=trace, iterations=len(trace))


def greedy_tas(channels, cfg: SystemConfig, **inner_kwargs):
    """Run :func:`inner_bcd` on every antenna and keep the best converged objective.

    Infeasible antennas are skipped; ties go to the lowest index.
    """
    best = None
    per_antenna = {}
    errors = []
    for m in range(channels.M):
        try:
            state = inner_bcd(channels, cfg, m, **inner_kwargs)
        except InfeasibleError as exc:
            errors.append(str(exc))
            continue
        per_antenna[m] = state.t
        if best is None or state.t > best.t:
            best = state
    if best is None:
        raise InfeasibleError("all antennas infeasible: " + "; ".join(errors))
    best.per_antenna = per_antenna
    return best
