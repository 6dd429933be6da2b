"""Scenario configuration: defaults, JSON parsing, validation, rendering.

A config document is a flat JSON object.  Per-BD quantities (the harvester
constants and the circuit power) accept either a scalar, broadcast to every
BD, or a list of length ``N``.  Missing keys take the default scenario
values; unknown keys are rejected.
"""

import json
import math
from dataclasses import dataclass, field, fields

import numpy as np


class ConfigError(ValueError):
    """Raised for malformed documents or invariant violations."""


@dataclass(frozen=True)
class EHParams:
    """Nonlinear energy-harvester constants for one BD (SI units)."""

    a: float = 274.0  # 1/W, steepness
    b: float = 0.29
    p_se: float = 6.4e-5  # W, sensitivity
    p_sa: float = 4.927e-3  # W, saturation

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigError("eh_a must be positive")
        if not self.p_sa > 0:
            raise ConfigError("p_sa must be positive")
        if not self.p_se >= 0:
            raise ConfigError("p_se must be non-negative")
        if not math.isfinite(-self.a * self.p_se + self.b):
            raise ConfigError("eh_b must keep -a*p_se + b finite")

    @property
    def offset(self) -> float:
        """``exp(-a * p_se + b)``, the constant shared by the transfer and its inverse."""
        return math.exp(-self.a * self.p_se + self.b)


_PER_BD = ("eh_a", "eh_b", "p_se", "p_sa", "p_circuit")


@dataclass(frozen=True)
class SystemConfig:
    M: int = 4
    N: int = 4
    K: int = 4
    ad_pos: tuple = (0.0, 0.0)
    ap_pos: tuple = (6.0, 0.0)
    bd_circle_center: tuple = (3.0, 3.0)
    bd_circle_radius: float = 2.0
    path_loss_exponent: float = 2.2
    rician_factor_db: float = 2.8
    p_max: float = 1.0
    r_min: float = 1.0
    p_circuit: tuple = None  # per BD, W
    eh: tuple = None  # per BD EHParams
    sigma_w2: float = 1e-8
    sigma_n2: float = 1e-8  # carried, never enters a rate formula
    omega_th: float = 1e-3
    phi_th: float = 1e-3
    eps_th: float = 1e-3
    max_iter_a1: int = 1000
    max_iter_a2: int = 1000
    max_iter_a3: int = 1000
    trials: int = 200
    seed: int = 0
    redraw_bd_positions: bool = True
    frc_alpha: float = 0.3
    tc_max_sweeps: int = 50
    rician_k: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        for name in ("M", "N", "K"):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.p_circuit is None:
            set_(self, "p_circuit", (1e-3,) * self.N)
        if self.eh is None:
            set_(self, "eh", (EHParams(),) * self.N)
        set_(self, "p_circuit", tuple(float(x) for x in self.p_circuit))
        set_(self, "eh", tuple(self.eh))
        for name in ("ad_pos", "ap_pos", "bd_circle_center"):
            val = tuple(float(x) for x in getattr(self, name))
            if len(val) != 2:
                raise ConfigError(f"{name} must be a 2-D coordinate")
            set_(self, name, val)
        if len(self.p_circuit) != self.N or len(self.eh) != self.N:
            raise ConfigError("per-BD parameters must have length N")
        for name in ("p_max", "sigma_w2", "sigma_n2", "bd_circle_radius", "path_loss_exponent"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if any(not pc > 0 for pc in self.p_circuit):
            raise ConfigError("p_circuit must be positive")
        if not self.r_min >= 0:
            raise ConfigError("r_min must be non-negative")
        for name in ("omega_th", "phi_th", "eps_th"):
            if not 0 < getattr(self, name) < 1:
                raise ConfigError(f"{name} must lie in (0, 1)")
        for name in ("max_iter_a1", "max_iter_a2", "max_iter_a3", "trials", "tc_max_sweeps"):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not 0 < self.frc_alpha <= 1:
            raise ConfigError("frc_alpha must lie in (0, 1]")
        if math.isnan(self.rician_factor_db):
            raise ConfigError("rician_factor_db must be a number")
        # the only dB quantity; everything downstream is linear
        set_(self, "rician_k", 10.0 ** (self.rician_factor_db / 10.0))

    @property
    def phi_inv_circuit(self) -> np.ndarray:
        """Per-BD harvester input power needed to cover the circuit power."""
        from .energy import eh_inverse

        return np.array([eh_inverse(pc, eh) for pc, eh in zip(self.p_circuit, self.eh)])


_SCALAR_KEYS = {f.name for f in fields(SystemConfig) if f.init} - {"eh", "p_circuit"}
KNOWN_KEYS = frozenset(_SCALAR_KEYS | set(_PER_BD))


def _per_bd(doc, key, n, default):
    val = doc.get(key, default)
    if isinstance(val, (list, tuple)):
        if len(val) != n:
            raise ConfigError(f"{key} must have length N={n}, got {len(val)}")
        return [float(v) for v in val]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{key} must be a number or a list of numbers")
    return [float(val)] * n


def config_from_dict(doc: dict) -> SystemConfig:
    """Build a validated :class:`SystemConfig` from an already-decoded mapping."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    unknown = sorted(set(doc) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    kwargs = {}
    for key in _SCALAR_KEYS:
        if key not in doc:
            continue
        val = doc[key]
        if key in ("ad_pos", "ap_pos", "bd_circle_center"):
            if not isinstance(val, (list, tuple)):
                raise ConfigError(f"{key} must be a list of two numbers")
        elif key == "redraw_bd_positions":
            if not isinstance(val, bool):
                raise ConfigError(f"{key} must be true or false")
        elif isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{key} must be a number")
        kwargs[key] = val
    n = int(doc.get("N", SystemConfig.N))
    if n < 1:
        raise ConfigError("N must be a positive integer")
    d = EHParams()
    a = _per_bd(doc, "eh_a", n, d.a)
    b = _per_bd(doc, "eh_b", n, d.b)
    p_se = _per_bd(doc, "p_se", n, d.p_se)
    p_sa = _per_bd(doc, "p_sa", n, d.p_sa)
    kwargs["p_circuit"] = _per_bd(doc, "p_circuit", n, 1e-3)
    kwargs["eh"] = tuple(EHParams(*vals) for vals in zip(a, b, p_se, p_sa))
    return SystemConfig(**kwargs)


def parse_config(text: str) -> SystemConfig:
    """Parse a JSON config document; an empty document yields all defaults."""
    if not text.strip():
        return SystemConfig()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config document: {exc}") from None
    return config_from_dict(doc)


def _collapse(values):
    values = list(values)
    return values[0] if all(v == values[0] for v in values) else values


def config_to_dict(cfg: SystemConfig) -> dict:
    doc = {}
    for f in fields(SystemConfig):
        if not f.init or f.name in ("eh", "p_circuit"):
            continue
        val = getattr(cfg, f.name)
        doc[f.name] = list(val) if isinstance(val, tuple) else val
    doc["eh_a"] = _collapse(e.a for e in cfg.eh)
    doc["eh_b"] = _collapse(e.b for e in cfg.eh)
    doc["p_se"] = _collapse(e.p_se for e in cfg.eh)
    doc["p_sa"] = _collapse(e.p_sa for e in cfg.eh)
    doc["p_circuit"] = _collapse(cfg.p_circuit)
    return doc


def render_config(cfg: SystemConfig) -> str:
    """Render ``cfg`` as a JSON document that :func:`parse_config` reads back exactly."""
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True)
