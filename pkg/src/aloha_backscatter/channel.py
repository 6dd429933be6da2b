"""Node placement and Rician block-fading channel draws."""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig


@dataclass(frozen=True)
class Topology:
    ad_pos: np.ndarray  # (2,)
    ap_pos: np.ndarray  # (2,)
    bd_pos: np.ndarray  # (N, 2)


@dataclass(frozen=True)
class ChannelRealization:
    """One block of channels.

    ``h_f[m, n]`` AD antenna m to BD n, ``h_d[m]`` AD antenna m to the AP
    array (K,), ``h_b[n]`` BD n to the AP array (K,).
    """

    h_f: np.ndarray  # (M, N) complex
    h_d: np.ndarray  # (M, K) complex
    h_b: np.ndarray  # (N, K) complex

    @property
    def M(self):
        return self.h_f.shape[0]

    @property
    def N(self):
        return self.h_f.shape[1]

    @property
    def K(self):
        return self.h_d.shape[1]


def path_loss(d, mu):
    """Distance-dependent power gain ``d ** -mu``."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    out = d ** (-float(mu))
    return float(out) if out.ndim == 0 else out


def rician_vector(dim, kappa_db, rng):
    """Unit-average-power Rician vector with an all-ones line-of-sight part.

    ``kappa_db = +inf`` is the deterministic LOS limit, ``-inf`` is Rayleigh.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    # draw the scattered part unconditionally so stream consumption does not depend on kappa
    nlos = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / math.sqrt(2.0)
    if kappa_db == math.inf:
        return np.ones(dim, dtype=complex)
    kappa = 10.0 ** (kappa_db / 10.0)
    return math.sqrt(kappa / (1.0 + kappa)) * np.ones(dim) + math.sqrt(1.0 / (1.0 + kappa)) * nlos


def trial_streams(seed, trial):
    """Independent generators ``(topology, fading, algorithm)`` for one trial."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    return tuple(np.random.default_rng(child) for child in ss.spawn(3))


def draw_topology(config: SystemConfig, rng) -> Topology:
    """Place the BDs uniformly (by area) inside the configured circle."""
    r = config.bd_circle_radius * np.sqrt(rng.random(config.N))
    theta = 2.0 * np.pi * rng.random(config.N)
    centre = np.asarray(config.bd_circle_center)
    bd = centre + np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    return Topology(np.asarray(config.ad_pos, float), np.asarray(config.ap_pos, float), bd)


def realize_channels(topology: Topology, config: SystemConfig, rng) -> ChannelRealization:
    """Path loss times Rician small-scale fading on every link."""
    ad, ap, bd = topology.ad_pos, topology.ap_pos, topology.bd_pos
    d_ad_bd = np.linalg.norm(bd - ad, axis=1)
    d_bd_ap = np.linalg.norm(bd - ap, axis=1)
    d_ad_ap = float(np.linalg.norm(ap - ad))
    if d_ad_ap == 0 or np.any(d_ad_bd == 0) or np.any(d_bd_ap == 0):
        raise ValueError("coincident node positions")
    mu, kdb = config.path_loss_exponent, config.rician_factor_db
    M, N, K = config.M, config.N, config.K

    h_f = np.empty((M, N), dtype=complex)
    for m in range(M):
        h_f[m] = np.sqrt(path_loss(d_ad_bd, mu)) * rician_vector(N, kdb, rng)
    h_d = np.empty((M, K), dtype=complex)
    for m in range(M):
        h_d[m] = math.sqrt(path_loss(d_ad_ap, mu)) * rician_vector(K, kdb, rng)
    h_b = np.empty((N, K), dtype=complex)
    for n in range(N):
        h_b[n] = math.sqrt(path_loss(d_bd_ap[n], mu)) * rician_vector(K, kdb, rng)
    return ChannelRealization(h_f, h_d, h_b)


def trial_channels(config: SystemConfig, trial: int):
    """Topology, channels and the algorithm RNG for ``trial`` (paired across algorithms)."""
    topo_rng, fade_rng, algo_rng = trial_streams(config.seed, trial)
    if not config.redraw_bd_positions:
        topo_rng = trial_streams(config.seed, 0)[0]
    topo = draw_topology(config, topo_rng)
    return topo, realize_channels(topo, config, fade_rng), algo_rng


def dump_channels(rows, path):
    """Write ``(trial, ChannelRealization)`` pairs as long-format CSV."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "link", "i", "j", "re", "im"])
        for trial, ch in rows:
            for link, arr in (("f", ch.h_f), ("d", ch.h_d), ("b", ch.h_b)):
                for (i, j), z in np.ndenumerate(arr):
                    w.writerow([trial, link, i, j, repr(float(z.real)), repr(float(z.imag))])
