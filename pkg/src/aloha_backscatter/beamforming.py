"""Receive beamforming at the AP.

``mrc`` serves the backscattered signal (noise-limited after SIC).  The
active-signal beam is the max-SINR (generalised Rayleigh quotient) solution
``(interference + noise)^-1 h_d``: the relaxed SDP over ``V = v v^H`` only asks
for the AD QoS constraint to hold, and this beam maximises the AD SINR, so the
SDP is feasible exactly when this beam meets the QoS target.  ``verify_beam_sdp``
solves the relaxation independently (projected ascent on the spectraplex) and
is used to certify rank one and cross-check feasibility.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BeamSolveDiagnostics:
    rank_ratio: float  # lambda_2 / lambda_1
    c3_margin: float  # AD rate minus r_min
    feasible: bool


def _unit(v):
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("zero vector")
    return v / nrm


def _phase_fix(v):
    # rotate so the first non-negligible entry is real and positive
    idx = int(np.argmax(np.abs(v) > 1e-12 * np.max(np.abs(v))))
    ph = v[idx] / abs(v[idx])
    return v / ph


def rank_ratio(V):
    """``lambda_2 / lambda_1`` of a Hermitian PSD matrix, clipped to [0, 1]."""
    w = np.linalg.eigvalsh(V)
    if w.size == 1:
        return 0.0
    l1, l2 = w[-1], w[-2]
    if l1 <= 0:
        raise ValueError("matrix has no positive eigenvalue")
    return float(min(max(l2 / l1, 0.0), 1.0))


def mrc(h_b):
    """Maximum-ratio combiner ``h_b / ||h_b||``."""
    h_b = np.asarray(h_b, dtype=complex)
    if not np.any(h_b):
        raise ValueError("MRC needs a non-zero channel")
    return _unit(h_b)


def max_sinr_beam(h, R):
    """Unit ``v`` maximising ``|v^H h|^2 / v^H R v`` for Hermitian positive-definite ``R``."""
    return _phase_fix(_unit(np.linalg.solve(R, h)))


def interference_cov(h_b, weights, sigma_w2):
    """``sum_j w_j h_b[j] h_b[j]^H + sigma^2 I`` for rows of ``h_b`` (J, K)."""
    h_b = np.atleast_2d(h_b)
    K = h_b.shape[1]
    R = (h_b.T * np.asarray(weights, float)) @ h_b.conj()
    return R + sigma_w2 * np.eye(K)


def active_beam(h_d, h_b, h_f_gain, alpha, p, sigma_w2, r_min=0.0):
    """Max-SINR beam for the AD signal with one BD backscattering.

    Returns the unit beam and diagnostics whose ``c3_margin`` is the achieved
    AD rate minus ``r_min``.  ``h_b`` may also be a (J, K) stack with
    ``h_f_gain`` and ``alpha`` arrays of length J, in which case every row
    interferes at once.
    """
    h_d = np.asarray(h_d, dtype=complex)
    if not np.any(h_d):
        raise ValueError("direct channel must be non-zero")
    if not p > 0:
        raise ValueError("transmit power must be positive")
    w = np.atleast_1d(np.asarray(alpha, float) * np.asarray(h_f_gain, float)) * p
    R = interference_cov(h_b, w, sigma_w2)
    v = max_sinr_beam(h_d, R)
    num = float(np.abs(np.vdot(v, h_d)) ** 2) * p
    den = float(np.real(np.vdot(v, R @ v)))
    margin = float(np.log2(1.0 + num / den)) - r_min
    return v, BeamSolveDiagnostics(0.0, margin, margin >= 0.0)


def mmse_beam(h_target, h_interf, p, sigma_w2):
    """MMSE receive beam ``(sum h h^H + sigma^2/p I)^-1 h_target``, normalised.

    ``h_interf`` is a (possibly empty) sequence of effective interferer
    channels; the target's own outer product is part of the sum.
    """
    h_target = np.asarray(h_target, dtype=complex)
    if not np.any(h_target):
        raise ValueError("MMSE needs a non-zero target channel")
    K = h_target.shape[0]
    R = np.outer(h_target, h_target.conj()) + (sigma_w2 / p) * np.eye(K)
    for h in h_interf:
        h = np.asarray(h, dtype=complex)
        R += np.outer(h, h.conj())
    return _unit(np.linalg.solve(R, h_target))


def verify_beam_sdp(h_d, h_b, h_f_gain, alpha, p, sigma_w2, r_min, tol=1e-12, max_iter=1000):
    """Solve the relaxed beam SDP by projected ascent and report its rank.

    Maximises the QoS margin ``Tr(A V) - (2^r_min - 1) sigma^2`` with
    ``A = p H_d - (2^r_min - 1) alpha |h_f|^2 p H_b`` over ``{V >= 0, Tr V = 1}``.
    Each step moves along ``A`` and projects back onto the spectraplex (eigen
    decomposition plus simplex projection of the spectrum).  The step doubles
    every iteration, so for a simple top eigenvalue the iterate lands exactly
    on a vertex of the spectraplex after finitely many steps; the loop stops
    once successive iterates differ by less than ``tol`` in Frobenius norm.

    Returns ``(V, margin, rank_ratio, iterations)``.  A non-negative margin
    means the SDP is feasible.
    """
    h_d = np.asarray(h_d, dtype=complex)
    h_b = np.asarray(h_b, dtype=complex)
    K = h_d.shape[0]
    gamma = 2.0 ** r_min - 1.0
    A = p * np.outer(h_d, h_d.conj()) - gamma * alpha * h_f_gain * p * np.outer(h_b, h_b.conj())
    A = 0.5 * (A + A.conj().T)
    scale = float(np.max(np.abs(np.linalg.eigvalsh(A))))
    A_n = A / scale if scale > 0 else A
    V = np.eye(K, dtype=complex) / K
    step = 1.0
    it = 0
    for it in range(1, max_iter + 1):
        V_new = _project_spectraplex(V + step * A_n)
        delta = np.linalg.norm(V_new - V)
        V = V_new
        if delta < tol:
            break
        step = min(2.0 * step, 1e150)
    margin = float(np.real(np.trace(A @ V))) - gamma * sigma_w2
    return V, margin, rank_ratio(V), it


def _project_spectraplex(X):
    X = 0.5 * (X + X.conj().T)
    w, U = np.linalg.eigh(X)
    lam = _project_simplex(w)
    return (U * lam) @ U.conj().T


def _project_simplex(w):
    # Euclidean projection onto {x >= 0, sum x = 1}
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, w.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(w - theta, 0.0)
