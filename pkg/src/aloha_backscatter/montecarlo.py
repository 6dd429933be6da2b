"""Trial orchestration, empirical slot simulation, and aggregation."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bcd import BcdConvergenceError, greedy_tas
from .benchmarks import BenchmarkConfig, solve_ecap, solve_frc, solve_rtas, solve_tc, solve_tdma
from .channel import trial_channels
from .config import SystemConfig
from .linkmodel import jain_fi
from .powerrc import InfeasibleError
from .report import TrialReport

ALGORITHMS = ("proposed", "ecap", "frc", "rtas", "tdma", "tc")


class AllInfeasibleError(RuntimeError):
    """Every trial was infeasible for every requested algorithm."""


@dataclass
class AggregateStats:
    algorithm: str
    trials: int
    feasible_rate: float
    mean_objective: float
    ci_halfwidth: float
    median_objective: float
    mean_jain_fi: float
    mean_iterations: float


@dataclass
class AggregateReport:
    stats: dict  # algorithm -> AggregateStats
    sweep: dict = field(default_factory=dict)


def _run_one(name, channels, cfg, rng, bench):
    if name == "proposed":
        return greedy_tas(channels, cfg)
    if name == "ecap":
        return solve_ecap(channels, cfg)
    if name == "frc":
        return solve_frc(channels, cfg, bench)
    if name == "rtas":
        return solve_rtas(channels, cfg, rng)
    if name == "tdma":
        return solve_tdma(channels, cfg)[0]
    if name == "tc":
        return solve_tc(channels, cfg, bench)
    raise ValueError(f"unknown algorithm {name!r}")


def solve_trial(cfg: SystemConfig, trial: int, algorithms=ALGORITHMS, sweep=None):
    """Run every algorithm on the same channel realisation of ``trial``."""
    _, channels, algo_rng = trial_channels(cfg, trial)
    bench = BenchmarkConfig.from_config(cfg)
    N = channels.N
    reports = []
    for name in algorithms:
        try:
            state = _run_one(name, channels, cfg, algo_rng, bench)
        except (InfeasibleError, BcdConvergenceError):
            nan = np.full(N, np.nan)
            reports.append(TrialReport(trial, name, False, 0.0, nan, nan, nan, sweep=dict(sweep or {})))
            continue
        if name == "tc":
            rbd = np.asarray(state.rbar, float)  # everyone transmits every slot
        elif name == "tdma":
            rbd = state.q * state.rbar  # q holds slot fractions
        else:
            rbd = state.throughputs
        fi = jain_fi(rbd) if np.any(rbd > 0) else math.nan
        reports.append(TrialReport(
            trial=trial, algorithm=name, feasible=True, objective=float(state.t), rbd=rbd,
            q=np.asarray(state.q, float), alpha=np.asarray(state.alpha, float), antenna=int(state.m),
            jain_fi=fi, iterations=int(state.iterations), trace=state.flat_trace(),
            rbar=np.asarray(state.rbar, float), sweep=dict(sweep or {}),
        ))
    return reports


def aggregate(reports, algorithms=None):
    """Per-algorithm statistics; objective means are over feasible trials only."""
    algorithms = algorithms or sorted({r.algorithm for r in reports}, key=reports_order(reports))
    stats = {}
    for name in algorithms:
        rows = [r for r in reports if r.algorithm == name]
        ok = [r for r in rows if r.feasible]
        obj = np.array([r.objective for r in ok])
        if obj.size:
            mean = float(obj.mean())
            half = 1.96 * float(obj.std(ddof=1)) / math.sqrt(obj.size) if obj.size >= 2 else math.nan
            med = float(np.median(obj))
            fi = float(np.nanmean([r.jain_fi for r in ok]))
            iters = float(np.mean([r.iterations for r in ok]))
        else:
            mean = half = med = fi = iters = math.nan
        stats[name] = AggregateStats(name, len(rows), len(ok) / len(rows) if rows else math.nan,
                                     mean, half, med, fi, iters)
    sweep = reports[0].sweep if reports else {}
    return AggregateReport(stats, dict(sweep))


def reports_order(reports):
    first = {}
    for i, r in enumerate(reports):
        first.setdefault(r.algorithm, i)
    return lambda name: first[name]


def run_trials(cfg: SystemConfig, algorithms=("proposed",), trials=None, sweep=None):
    """Run ``trials`` paired trials (default ``cfg.trials``) and aggregate.

    Returns ``(AggregateReport, [TrialReport, ...])``.
    """
    for name in algorithms:
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}")
    trials = cfg.trials if trials is None else trials
    reports = []
    for t in range(trials):
        reports.extend(solve_trial(cfg, t, algorithms, sweep))
    if not any(r.feasible for r in reports):
        raise AllInfeasibleError("every trial was infeasible for every algorithm")
    return aggregate(reports, list(algorithms)), reports


def simulate_access(q, rbar, slots, rng):
    """Empirical per-BD throughput of slotted ALOHA over ``slots`` slots.

    Each BD transmits independently with probability ``q_n``; a slot credits
    ``rbar[n]`` only when BD n is the sole transmitter.
    """
    if slots < 1:
        raise ValueError("need at least one slot")
    q = np.ascontiguousarray(q, dtype=np.float64)
    rbar = np.asarray(rbar, dtype=np.float64)
    u = rng.random((int(slots), q.size))
    counts = _kernels.slot_successes(u, q)
    return counts * rbar / slots
