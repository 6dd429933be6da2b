"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and the environment
variable ``ALOHA_BACKSCATTER_DISABLE_NUMBA`` is unset (or ``0``).  Both paths
are kept importable under explicit names (``*_numba`` / ``*_numpy``) so the
tests and ``bench/bench_kernels.py`` can compare them directly.
"""

import math
import os

import numpy as np

_FLAG = "ALOHA_BACKSCATTER_DISABLE_NUMBA"

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HAVE_NUMBA = njit is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(_FLAG, "").strip().lower() in ("", "0", "false", "no")


def _jit(func):
    return njit(cache=True)(func) if HAVE_NUMBA else func


# ---------------------------------------------------------------------------
# slotted-ALOHA access simulation


def _slot_successes_loop(uniforms, q):
    slots, n_bd = uniforms.shape
    counts = np.zeros(n_bd, dtype=np.int64)
    for s in range(slots):
        winner = -1
        n_tx = 0
        for n in range(n_bd):
            if uniforms[s, n] < q[n]:
                n_tx += 1
                winner = n
        if n_tx == 1:
            counts[winner] += 1
    return counts


def slot_successes_numpy(uniforms, q):
    """Count, per BD, the slots in which it was the only transmitter."""
    tx = uniforms < q[None, :]
    alone = tx.sum(axis=1) == 1
    return (tx & alone[:, None]).sum(axis=0).astype(np.int64)


# ---------------------------------------------------------------------------
# exhaustive grid over access probabilities (N <= 3)


def _cap_grid_loop(rbar, grid):
    n_bd = rbar.shape[0]
    g = grid.shape[0]
    best = -1.0
    best_q = np.zeros(n_bd)
    if n_bd == 1:
        for i in range(g):
            v = grid[i] * rbar[0]
            if v > best:
                best = v
                best_q[0] = grid[i]
    elif n_bd == 2:
        for i in range(g):
            q0 = grid[i]
            for j in range(g):
                q1 = grid[j]
                v = min(q0 * (1.0 - q1) * rbar[0], q1 * (1.0 - q0) * rbar[1])
                if v > best:
                    best = v
                    best_q[0] = q0
                    best_q[1] = q1
    else:
        for i in range(g):
            q0 = grid[i]
            for j in range(g):
                q1 = grid[j]
                a01 = (1.0 - q0) * (1.0 - q1)
                for k in range(g):
                    q2 = grid[k]
                    v0 = q0 * (1.0 - q1) * (1.0 - q2) * rbar[0]
                    v1 = q1 * (1.0 - q0) * (1.0 - q2) * rbar[1]
                    v2 = q2 * a01 * rbar[2]
                    v = min(v0, min(v1, v2))
                    if v > best:
                        best = v
                        best_q[0] = q0
                        best_q[1] = q1
                        best_q[2] = q2
    return best_q, best


def cap_grid_numpy(rbar, grid):
    """Vectorised exhaustive max-min over the product grid ``grid**N``."""
    n_bd = rbar.shape[0]
    best = -1.0
    best_q = np.zeros(n_bd)
    if n_bd == 1:
        vals = grid * rbar[0]
        i = int(np.argmax(vals))
        return np.array([grid[i]]), float(vals[i])
    # chunk on the first axis to bound memory for N=3
    rest = np.stack(np.meshgrid(*([grid] * (n_bd - 1)), indexing="ij"), axis=-1).reshape(-1, n_bd - 1)
    for q0 in grid:
        q = np.empty((rest.shape[0], n_bd))
        q[:, 0] = q0
        q[:, 1:] = rest
        one_minus = 1.0 - q
        total = np.prod(one_minus, axis=1)
        vals = np.min(q / one_minus * total[:, None] * rbar[None, :], axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            best_q = q[i].copy()
    return best_q, best


# ---------------------------------------------------------------------------
# brute-force (alpha, P) search for the power / reflection-coefficient block


@_jit
def _eh_transfer_scalar(p_eh, a, p_se, p_sa, offset):
    # offset = exp(-a * p_se + b)
    num = -math.expm1(-a * (p_eh - p_se))
    val = p_sa * num / (1.0 + offset * math.exp(-a * (p_eh - p_se)))
    return val if val > 0.0 else 0.0


def _rc_grid_loop(trd, trb, g_f, hb2, pr, a, p_se, p_sa, offset, p_circuit,
                  gamma, sigma2, p_grid, alpha_grid):
    n_bd = trd.shape[0]
    best = -1.0
    best_p = 0.0
    best_alpha = np.zeros(n_bd)
    cur_alpha = np.zeros(n_bd)
    for ip in range(p_grid.shape[0]):
        p = p_grid[ip]
        t_p = np.inf
        for n in range(n_bd):
            best_n = -1.0
            for ia in range(alpha_grid.shape[0]):
                al = alpha_grid[ia]
                # AD QoS at this beam
                if trd[n] * p < gamma * (al * trb[n] * g_f[n] * p + sigma2):
                    continue
                if _eh_transfer_scalar((1.0 - al) * p * g_f[n], a[n], p_se[n], p_sa[n], offset[n]) < p_circuit[n]:
                    continue
                v = pr[n] * math.log2(1.0 + al * g_f[n] * hb2[n] * p / sigma2)
                if v > best_n:
                    best_n = v
                    cur_alpha[n] = al
            if best_n < 0.0:
                t_p = -1.0
                break
            if best_n < t_p:
                t_p = best_n
        if t_p > best:
            best = t_p
            best_p = p
            best_alpha[:] = cur_alpha
    return best_p, best_alpha, best


def _eh_transfer_vec(p_eh, a, p_se, p_sa, offset):
    d = p_eh - p_se
    val = p_sa * (-np.expm1(-a * d)) / (1.0 + offset * np.exp(-a * d))
    return np.maximum(val, 0.0)


def rc_grid_numpy(trd, trb, g_f, hb2, pr, a, p_se, p_sa, offset, p_circuit,
                  gamma, sigma2, p_grid, alpha_grid):
    """Vectorised counterpart of the (alpha, P) brute-force search."""
    n_bd = trd.shape[0]
    P = p_grid[:, None]
    A = alpha_grid[None, :]
    best = -1.0
    best_p = 0.0
    best_alpha = np.zeros(n_bd)
    per_bd_val = np.empty((n_bd, p_grid.shape[0]))
    per_bd_alpha = np.empty((n_bd, p_grid.shape[0]))
    for n in range(n_bd):
        ok = trd[n] * P >= gamma * (A * trb[n] * g_f[n] * P + sigma2)
        ok &= _eh_transfer_vec((1.0 - A) * P * g_f[n], a[n], p_se[n], p_sa[n], offset[n]) >= p_circuit[n]
        vals = np.where(ok, pr[n] * np.log2(1.0 + A * g_f[n] * hb2[n] * P / sigma2), -1.0)
        idx = np.argmax(vals, axis=1)
        per_bd_val[n] = vals[np.arange(p_grid.shape[0]), idx]
        per_bd_alpha[n] = alpha_grid[idx]
    t_p = per_bd_val.min(axis=0)
    t_p[(per_bd_val < 0.0).any(axis=0)] = -1.0
    ip = int(np.argmax(t_p))
    if t_p[ip] > best:
        best = float(t_p[ip])
        best_p = float(p_grid[ip])
        best_alpha = per_bd_alpha[:, ip].copy()
    return best_p, best_alpha, best


# ---------------------------------------------------------------------------
# dispatch

if HAVE_NUMBA:
    slot_successes_numba = _jit(_slot_successes_loop)
    cap_grid_numba = _jit(_cap_grid_loop)
    rc_grid_numba = _jit(_rc_grid_loop)
else:  # pragma: no cover
    slot_successes_numba = cap_grid_numba = rc_grid_numba = None

if USE_NUMBA:
    slot_successes = slot_successes_numba
    cap_grid = cap_grid_numba
    rc_grid = rc_grid_numba
else:
    slot_successes = slot_successes_numpy
    cap_grid = cap_grid_numpy
    rc_grid = rc_grid_numpy


def backend():
    """Name of the active kernel backend (``"numba"`` or ``"numpy"``)."""
    return "numba" if USE_NUMBA else "numpy"
