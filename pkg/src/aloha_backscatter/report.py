"""Per-trial records and their CSV serialisation."""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

FIXED_COLUMNS = ("trial", "algorithm", "feasible", "objective", "jain_fi", "antenna", "iterations")


@dataclass
class TrialReport:
    trial: int
    algorithm: str
    feasible: bool
    objective: float
    rbd: np.ndarray  # per-BD average throughput
    q: np.ndarray
    alpha: np.ndarray
    antenna: int = -1
    jain_fi: float = math.nan
    iterations: int = 0
    trace: list = field(default_factory=list)  # flattened (t, t_bar, t_hat) per iteration
    rbar: np.ndarray = None  # per-BD rate when accessed
    sweep: dict = field(default_factory=dict)


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.15g" % x
    return str(x)


def report_columns(n_bd, sweep_keys=(), trace=False):
    cols = list(FIXED_COLUMNS)
    for prefix in ("q", "alpha", "rbd"):
        cols += [f"{prefix}_{i}" for i in range(1, n_bd + 1)]
    cols += list(sweep_keys)
    if trace:
        cols.append("trace")
    return cols


def _open(dest):
    if hasattr(dest, "write"):
        return dest, False
    return open(dest, "w", newline=""), True


def emit_csv(reports, dest, trace=False):
    """Write one row per report to ``dest`` (path or text stream).

    Columns are the fixed block, then ``q_i``, ``alpha_i``, ``rbd_i`` for
    each BD, then any sweep keys, and a ``;``-joined ``trace`` column when
    requested.  Floats carry 15 significant digits.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("empty report set")
    n_bd = max(len(r.q) for r in reports)
    sweep_keys = list(reports[0].sweep)
    cols = report_columns(n_bd, sweep_keys, trace)
    fh, close = _open(dest)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in reports:
            row = [r.trial, r.algorithm, bool(r.feasible), float(r.objective), float(r.jain_fi),
                   r.antenna, r.iterations]
            for vec in (r.q, r.alpha, r.rbd):
                vals = list(np.asarray(vec, float))
                row += vals + [math.nan] * (n_bd - len(vals))
            row += [r.sweep.get(k, "") for k in sweep_keys]
            if trace:
                row.append(";".join(_fmt(float(x)) for x in r.trace))
            w.writerow([_fmt(x) for x in row])
    finally:
        if close:
            fh.close()


AGG_COLUMNS = ("algorithm", "trials", "feasible_rate", "mean_objective", "ci_halfwidth",
               "median_objective", "mean_jain_fi", "mean_iterations")


def emit_aggregate_csv(aggregates, dest):
    """Write aggregate rows; sweep-axis values lead each row."""
    aggregates = list(aggregates)
    if not aggregates:
        raise ValueError("empty report set")
    keys = []
    for agg in aggregates:
        keys += [k for k in agg.sweep if k not in keys]
    fh, close = _open(dest)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(keys + list(AGG_COLUMNS))
        for agg in aggregates:
            for st in agg.stats.values():
                row = [agg.sweep.get(k, "") for k in keys]
                row += [getattr(st, c) for c in AGG_COLUMNS]
                w.writerow([_fmt(x) for x in row])
    finally:
        if close:
            fh.close()
