"""Comparison schemes: equal CAP, fixed RC, random antenna, TDMA, and
simultaneous transmission with collisions (TC)."""

from dataclasses import dataclass

import numpy as np

from .bcd import SolveState, greedy_tas, inner_bcd
from .beamforming import active_beam, mmse_beam, mrc
from .config import SystemConfig
from .linkmodel import rate, sinr_ad
from .powerrc import InfeasibleError


@dataclass(frozen=True)
class BenchmarkConfig:
    frc_alpha: float = 0.3
    tdma: bool = True
    tc_max_sweeps: int = 50
    tc_bisect_iters: int = 40

    def __post_init__(self):
        if not 0 < self.frc_alpha <= 1:
            raise ValueError("frc_alpha must lie in (0, 1]")

    @classmethod
    def from_config(cls, cfg: SystemConfig):
        return cls(frc_alpha=cfg.frc_alpha, tc_max_sweeps=cfg.tc_max_sweeps)


@dataclass(frozen=True)
class TdmaSolution:
    tau: np.ndarray
    t: float


def solve_ecap(channels, cfg: SystemConfig):
    """Proposed pipeline with every CAP pinned to ``1/N``."""
    return greedy_tas(channels, cfg, q_fixed=1.0 / channels.N)


def solve_frc(channels, cfg: SystemConfig, bench=None):
    """Proposed pipeline with every RC pinned to ``frc_alpha``."""
    bench = bench or BenchmarkConfig.from_config(cfg)
    return greedy_tas(channels, cfg, alpha_fixed=bench.frc_alpha)


def solve_rtas(channels, cfg: SystemConfig, rng):
    """Uniformly random feasible antenna, then the inner loop on it.

    Antennas are tried in a random order; the first feasible one is uniform
    over the feasible set.
    """
    errors = []
    for m in rng.permutation(channels.M):
        try:
            state = inner_bcd(channels, cfg, int(m))
        except InfeasibleError as exc:
            errors.append(str(exc))
            continue
        state.per_antenna = {int(m): state.t}
        return state
    raise InfeasibleError("all antennas infeasible: " + "; ".join(errors))


def tdma_allocate(r, r_ad, r_min, iters=200):
    """Max-min slot fractions ``tau`` subject to ``sum tau = 1`` and the average AD rate.

    A level ``t`` is feasible iff ``t * sum 1/r <= 1`` and the AD rate
    constraint still holds after every spare slot fraction goes to the BD
    with the best AD rate.  Bisection finds the largest feasible level.
    """
    r = np.asarray(r, float)
    r_ad = np.asarray(r_ad, float)
    if np.any(r <= 0):
        raise ValueError("BD rates must be positive")
    best_ad = int(np.argmax(r_ad))
    if r_ad[best_ad] < r_min:
        raise InfeasibleError("no BD allocation meets the AD rate target")
    s1 = float(np.sum(1.0 / r))
    s_ad = float(np.sum(r_ad / r))

    def ad_rate(t):
        return t * s_ad + (1.0 - t * s1) * r_ad[best_ad]

    hi = 1.0 / s1
    if ad_rate(hi) >= r_min:
        t = hi
    else:
        lo = 0.0
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            if ad_rate(mid) >= r_min:
                lo = mid
            else:
                hi = mid
        t = lo
    tau = t / r
    tau[best_ad] += 1.0 - float(np.sum(tau))
    return TdmaSolution(tau, float(np.min(tau * r)))


def solve_tdma(channels, cfg: SystemConfig):
    """Beams, power and RCs from the proposed loop; slot fractions by :func:`tdma_allocate`."""
    best = None
    errors = []
    for m in range(channels.M):
        try:
            state = inner_bcd(channels, cfg, m)
        except InfeasibleError as exc:
            errors.append(str(exc))
            continue
        g = np.abs(channels.h_f[m]) ** 2
        r_ad = np.array([
            rate(sinr_ad(state.v_a[n], channels.h_d[m], channels.h_b[n], g[n], state.alpha[n],
                         state.p, cfg.sigma_w2))
            for n in range(channels.N)
        ])
        try:
            sol = tdma_allocate(state.rbar, r_ad, cfg.r_min)
        except InfeasibleError as exc:
            errors.append(str(exc))
            continue
        if best is None or sol.t > best[1].t:
            state.q = sol.tau
            state.t = sol.t
            best = (state, sol)
    if best is None:
        raise InfeasibleError("TDMA infeasible on every antenna: " + "; ".join(errors))
    return best


# ---------------------------------------------------------------------------
# simultaneous transmission


def _tc_eval(channels, m, alpha, p, cfg):
    """Per-BD SINR rates, the AD rate and beams when every BD backscatters."""
    g = np.abs(channels.h_f[m]) ** 2
    h_b = channels.h_b
    N = channels.N
    v_a, diag = active_beam(channels.h_d[m], h_b, g, alpha, p, cfg.sigma_w2, cfg.r_min)
    eff = (np.sqrt(alpha) * channels.h_f[m])[:, None] * h_b
    v_b = np.empty_like(h_b)
    rates = np.zeros(N)
    for n in range(N):
        if alpha[n] <= 0:
            v_b[n] = mrc(h_b[n])
            continue
        others = [eff[j] for j in range(N) if j != n]
        v_b[n] = mmse_beam(eff[n], others, p, cfg.sigma_w2)
        gains = np.abs(h_b @ v_b[n].conj()) ** 2 * alpha * g * p
        sig = gains[n]
        rates[n] = rate(sig / (gains.sum() - sig + cfg.sigma_w2))
    return rates, diag.c3_margin, v_a, v_b


def _tc_antenna(channels, m, cfg, bench):
    g = np.abs(channels.h_f[m]) ** 2
    p = cfg.p_max
    alpha_eh = np.minimum(1.0 - cfg.phi_inv_circuit / (p * g), 1.0)
    if np.any(alpha_eh <= 0):
        raise InfeasibleError(f"antenna {m}: harvested power cannot cover the circuit at p_max")
    N = channels.N
    if _tc_eval(channels, m, np.zeros(N), p, cfg)[1] < 0:
        raise InfeasibleError(f"antenna {m}: AD rate target unreachable")

    alpha = alpha_eh / 2.0
    for _ in range(60):
        if _tc_eval(channels, m, alpha, p, cfg)[1] >= 0:
            break
        alpha = alpha / 2.0
    rates = _tc_eval(channels, m, alpha, p, cfg)[0]
    value = float(np.min(rates))
    trace = [value]

    def with_alpha(n, a):
        trial = alpha.copy()
        trial[n] = a
        return trial

    for _ in range(bench.tc_max_sweeps):
        before = value
        for n in range(N):
            # largest alpha_n keeping the AD rate target (monotone in alpha_n)
            lo, hi = 0.0, alpha_eh[n]
            if _tc_eval(channels, m, with_alpha(n, hi), p, cfg)[1] < 0:
                for _ in range(bench.tc_bisect_iters):
                    mid = 0.5 * (lo + hi)
                    if _tc_eval(channels, m, with_alpha(n, mid), p, cfg)[1] >= 0:
                        lo = mid
                    else:
                        hi = mid
                hi = lo
            cap = hi
            # own rate rises and the others fall with alpha_n: bisect on the crossing
            r_cap = _tc_eval(channels, m, with_alpha(n, cap), p, cfg)[0]
            if N == 1 or r_cap[n] <= np.min(np.delete(r_cap, n)):
                cand = cap
            else:
                lo, hi = 0.0, cap
                for _ in range(bench.tc_bisect_iters):
                    mid = 0.5 * (lo + hi)
                    r_mid = _tc_eval(channels, m, with_alpha(n, mid), p, cfg)[0]
                    if r_mid[n] < np.min(np.delete(r_mid, n)):
                        lo = mid
                    else:
                        hi = mid
                # the crossing lies in [lo, hi]; keep the better end
                r_lo = np.min(_tc_eval(channels, m, with_alpha(n, lo), p, cfg)[0])
                r_hi = np.min(_tc_eval(channels, m, with_alpha(n, hi), p, cfg)[0])
                cand = lo if r_lo >= r_hi else hi
            r_cand = _tc_eval(channels, m, with_alpha(n, cand), p, cfg)[0]
            if np.min(r_cand) > value:
                alpha = with_alpha(n, cand)
                value = float(np.min(r_cand))
        trace.append(value)
        if value - before < cfg.eps_th:
            break

    rates, _, v_a, v_b = _tc_eval(channels, m, alpha, p, cfg)
    return SolveState(m=m, p=p, alpha=alpha, q=np.ones(N), v_a=np.tile(v_a, (N, 1)), v_b=v_b,
                      t=float(np.min(rates)), rbar=rates,
                      trace=[(x, x, x) for x in trace], iterations=len(trace))


def solve_tc(channels, cfg: SystemConfig, bench=None):
    """All BDs backscatter at once; MMSE per BD and a joint AD rate constraint.

    The reported throughputs are the per-BD SINR rates (no access
    probability), and ``t`` is their minimum.
    """
    bench = bench or BenchmarkConfig.from_config(cfg)
    best = None
    per_antenna = {}
    errors = []
    for m in range(channels.M):
        try:
            state = _tc_antenna(channels, m, cfg, bench)
        except InfeasibleError as exc:
            errors.append(str(exc))
            continue
        per_antenna[m] = state.t
        if best is None or state.t > best.t:
            best = state
    if best is None:
        raise InfeasibleError("TC infeasible on every antenna: " + "; ".join(errors))
    best.per_antenna = per_antenna
    return best
