"""Channel-access probabilities maximising the worst average throughput.

In log variables the problem reads ``max min_n [ln q_n + sum_{j!=n} ln(1-q_j)
+ ln r_n]``, a concave max-min.  Writing ``x_n = q_n / (1 - q_n)``, any level
``c = min_n x_n r_n`` forces ``q_n >= c / (r_n + c)`` and hence

    min_n Pr(n) r_n <= c * prod_j r_j / (r_j + c),

with equality when every constraint is tight.  The optimum is therefore the
single level ``c`` maximising the right-hand side, whose stationarity
condition is ``sum_n c / (r_n + c) = 1`` (the optimal CAPs sum to one).  The
solver bisects on ``ln c`` for that root; each iterate fixes a candidate
common throughput ``t~``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .linkmodel import success_probs

EPS = 1e-6


class CapConvergenceError(RuntimeError):
    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class CapSolution:
    q: np.ndarray
    t_hat: float
    active: np.ndarray
    iterations: int
    residual: float = 0.0  # |sum q - 1| at the unclipped optimum


def _log_objective(q, rbar):
    # F(q) = min_n [ln q_n + sum_{j != n} ln(1 - q_j) + ln r_n]
    q = np.asarray(q, float)
    s = np.sum(np.log1p(-q))
    return float(np.min(np.log(q) - np.log1p(-q) + s + np.log(rbar)))


def log_objective(q, rbar):
    """Log-domain max-min objective; concave on the open unit cube."""
    return _log_objective(q, rbar)


def _finish(q, rbar, iterations, residual):
    q = np.clip(q, EPS, 1.0 - EPS)
    vals = success_probs(q) * rbar
    t_hat = float(np.min(vals))
    active = vals - t_hat <= 1e-9 * max(t_hat, 1e-300)
    return CapSolution(q, t_hat, active, iterations, residual)


def solve_cap(rbar, tol=1e-3, max_iter=1000):
    """Max-min access probabilities for per-BD rates ``rbar`` (all positive).

    Bisection on the common level runs until the bracket on ``ln c`` is
    below ``1e-13`` (far inside ``tol``); ``tol`` bounds the stationarity
    residual ``|sum q - 1|`` that must hold on return.
    """
    rbar = np.asarray(rbar, dtype=float)
    if rbar.ndim != 1 or rbar.size < 1:
        raise ValueError("rbar must be a non-empty vector")
    if np.any(~(rbar > 0)) or not np.all(np.isfinite(rbar)):
        raise ValueError("access rates must be positive and finite")
    n = rbar.size
    if n == 1:
        # supremum at the open boundary q -> 1
        return _finish(np.array([1.0]), rbar, 0, 0.0)

    def excess(log_c):
        c = math.exp(log_c)
        return float(np.sum(c / (rbar + c))) - 1.0

    # excess >= 0 once c >= max(r)/(n-1) and < 0 while c < min(r)/(n-1)
    hi = math.log(float(np.max(rbar)) / (n - 1))
    lo = math.log(float(np.min(rbar)) / (2.0 * n))
    it = 0
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-13:
            break
    c = math.exp(0.5 * (lo + hi))
    q = c / (rbar + c)
    residual = abs(float(np.sum(q)) - 1.0)
    sol = _finish(q, rbar, it, residual)
    if residual > tol:
        raise CapConvergenceError(
            f"CAP bisection did not converge in {max_iter} iterations (residual {residual:.3g})", sol
        )
    return sol


def cap_oracle_grid(rbar, step=1e-3, refine=0):
    """Exhaustive grid maximisation of ``min_n Pr(n) r_n`` for ``N <= 3``.

    The grid is ``{step, 2 step, ..., 1 - step}`` in every coordinate.  Each
    ``refine`` level re-grids a window of +-2 cells around the incumbent at a
    tenth of the spacing, re-centring at that spacing until the incumbent
    stops improving (the optimum sits on a thin ridge that a single window
    can lose track of).
    """
    rbar = np.ascontiguousarray(rbar, dtype=np.float64)
    n = rbar.size
    if n > 3:
        raise ValueError("grid oracle limited to N <= 3")
    count = int(round(1.0 / step)) - 1
    grid = np.linspace(step, 1.0 - step, count)
    q, val = _kernels.cap_grid(rbar, grid)
    h = step
    for _ in range(refine):
        h_new = h / 10.0
        for _ in range(200):
            lo = np.maximum(q - 2 * h, h_new)
            hi = np.minimum(q + 2 * h, 1.0 - h_new)
            axes = [np.arange(lo[k], hi[k] + 0.5 * h_new, h_new) for k in range(n)]
            q_next, val_next = _refine(rbar, axes, q, val)
            moved = val_next > val
            q, val = q_next, val_next
            if not moved:
                break
        h = h_new
    q = np.asarray(q, float)
    vals = success_probs(q) * rbar
    return CapSolution(q, float(val), vals - val <= 1e-9 * max(val, 1e-300), count)


def _refine(rbar, axes, q0, v0):
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    one_minus = 1.0 - mesh
    vals = np.min(mesh / one_minus * np.prod(one_minus, axis=1)[:, None] * rbar[None, :], axis=1)
    i = int(np.argmax(vals))
    if vals[i] > v0:
        return mesh[i], float(vals[i])
    return q0, v0
