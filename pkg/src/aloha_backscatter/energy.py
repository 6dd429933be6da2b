"""Nonlinear (logistic) energy harvesting at the backscatter devices.

The logistic transfer is evaluated in the rearranged form::

    Phi(p) = p_sa * (1 - exp(-a (p - p_se))) / (1 + c * exp(-a (p - p_se))),
    c = exp(-a p_se + b),

which is algebraically identical to the usual ``p_sa / c * ((1 + c) / (1 +
exp(-a p + b)) - 1)`` form but keeps full relative precision near the
sensitivity threshold.  The inverse is the matching closed form.
"""

import math

import numpy as np

from .config import EHParams


class SaturationError(ValueError):
    """Requested output is at or above the harvester's saturation level."""


def harvested_input(alpha, p, h_f_gain):
    """RF power absorbed by a BD: the ``1 - alpha`` share of what reaches it."""
    if np.any(np.asarray(alpha) < 0) or np.any(np.asarray(alpha) > 1):
        raise ValueError("alpha must lie in [0, 1]")
    if np.any(np.asarray(p) < 0):
        raise ValueError("transmit power must be non-negative")
    return (1.0 - alpha) * p * h_f_gain


def eh_transfer(p_eh, params: EHParams):
    """Harvested DC power for RF input ``p_eh`` (scalar or array, watts).

    Zero at and below the sensitivity threshold, increasing, and bounded by
    ``params.p_sa``.
    """
    p_eh = np.asarray(p_eh, dtype=float)
    if np.any(p_eh < 0):
        raise ValueError("p_eh must be non-negative")
    d = p_eh - params.p_se
    # clip the exponent: far below threshold the bracket is negative anyway
    e = np.exp(np.minimum(-params.a * d, 700.0))
    val = params.p_sa * (-np.expm1(np.minimum(-params.a * d, 700.0))) / (1.0 + params.offset * e)
    out = np.maximum(val, 0.0)
    return float(out) if out.ndim == 0 else out


def eh_inverse(x, params: EHParams) -> float:
    """RF input power at which the harvester delivers ``x`` watts.

    Raises
    ------
    SaturationError
        If ``x >= p_sa``; no finite input reaches the saturation level.
    """
    x = float(x)
    if x < 0:
        raise ValueError("harvested power must be non-negative")
    if x >= params.p_sa:
        raise SaturationError(
            f"harvested power {x:.6g} W is not below the saturation level {params.p_sa:.6g} W"
        )
    u = x / params.p_sa
    p = params.p_se + (math.log1p(params.offset * u) - math.log1p(-u)) / params.a
    return max(p, 0.0)
