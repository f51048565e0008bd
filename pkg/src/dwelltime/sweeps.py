"""Velocity and absorption sweeps behind the fig1 and fig2 datasets.

These functions turn a :class:`~dwelltime.config.SweepConfig` into plain
arrays; formatting is left to :mod:`dwelltime.cli`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SweepConfig
from .dwell import barrier_dwell_eigenvalues, dwell_matrix, free_dwell_eigenvalues
from .operational import LaserParams, estimator_report
from .scattering import PiecewisePotential


def barrier_potential(cfg: SweepConfig) -> PiecewisePotential:
    return PiecewisePotential.square(cfg.barrier_height, cfg.region_length)


def lasers(cfg: SweepConfig) -> list[LaserParams]:
    return [
        LaserParams.in_gamma_units(d, o, cfg.gamma, cfg.wavelength) for d, o in cfg.lasers
    ]


@dataclass(frozen=True)
class EigenSweep:
    velocity: np.ndarray
    momentum: np.ndarray
    t_plus: np.ndarray
    t_minus: np.ndarray

    @property
    def average(self):
        return 0.5 * (self.t_plus + self.t_minus)

    @property
    def splitting_ratio(self):
        return (self.t_plus - self.t_minus) / (self.t_plus + self.t_minus)


def eigen_sweep(cfg: SweepConfig) -> EigenSweep:
    v = cfg.velocities()
    p = cfg.mass * v
    if cfg.barrier_height == 0:
        tp, tm = free_dwell_eigenvalues(p, cfg.region_length, cfg.mass, hbar=cfg.hbar)
    else:
        tp, tm = barrier_dwell_eigenvalues(
            p, cfg.region_length, cfg.barrier_height, cfg.mass, hbar=cfg.hbar
        )
    return EigenSweep(v, p, np.asarray(tp), np.asarray(tm))


@dataclass(frozen=True)
class Fig1Sweep:
    """Exact average dwell and per-laser estimator data on the velocity grid.

    Per-laser arrays have shape ``(n_velocities, n_lasers)``.
    """

    velocity: np.ndarray
    exact_dwell: np.ndarray
    tau_approx: np.ndarray
    absorption: np.ndarray
    relative_error: np.ndarray
    dwell_over_delay: np.ndarray
    v_imag: np.ndarray
    lasers: tuple

    @property
    def peak_index(self) -> int:
        return int(np.argmax(self.exact_dwell))

    @property
    def peak_velocity(self) -> float:
        return float(self.velocity[self.peak_index])


def fig1_sweep(cfg: SweepConfig, convention: str | None = None) -> Fig1Sweep:
    convention = convention or cfg.convention
    pot = barrier_potential(cfg)
    lz = lasers(cfg)
    v = cfg.velocities()
    n, k = v.size, len(lz)
    exact = np.empty(n)
    tau = np.empty((n, k))
    absorb = np.empty((n, k))
    err = np.empty((n, k))
    ratio = np.empty((n, k))
    v_imag = np.empty(k)
    for i, vel in enumerate(v):
        p = cfg.mass * vel
        shared = None
        if convention == "barrier-is-lightshift":
            shared = dwell_matrix(pot, p, cfg.mass, hbar=cfg.hbar).average
        for j, laser in enumerate(lz):
            rep = estimator_report(
                pot, p, cfg.mass, laser,
                convention=convention, exact_dwell=shared, hbar=cfg.hbar,
            )
            if j == 0:
                exact[i] = rep.exact_dwell
            tau[i, j] = rep.tau_approx
            absorb[i, j] = rep.absorption
            err[i, j] = rep.relative_error
            ratio[i, j] = rep.dwell_over_delay
            v_imag[j] = rep.v_imag
    return Fig1Sweep(v, exact, tau, absorb, err, ratio, v_imag, tuple(lz))


@dataclass(frozen=True)
class Fig2Sweep:
    """Estimator quality along a ``V_I`` sweep at fixed incident velocity."""

    velocity: float
    exact_dwell: float
    delta_over_gamma: np.ndarray
    omega_over_gamma: np.ndarray
    v_imag: np.ndarray
    absorption: np.ndarray
    tau_approx: np.ndarray
    relative_error: np.ndarray
    dwell_over_delay: np.ndarray


def fig2_lasers(cfg: SweepConfig) -> tuple[np.ndarray, np.ndarray]:
    """Laser settings for the absorption sweep, ordered by increasing ``V_I``.

    ``V_I / V_R = gamma / (2 delta)`` is swept log-uniformly while
    ``omega**2 / delta`` keeps the value of the first configured setting,
    so the light shift stays fixed.
    """
    ratios = np.geomspace(cfg.fig2_ratio_min, cfg.fig2_ratio_max, cfg.fig2_points)
    d_ref, o_ref = cfg.lasers[0]
    delta = 1.0 / (2.0 * ratios)
    omega = np.sqrt(delta * o_ref**2 / d_ref)
    return delta, omega


def fig2_sweep(cfg: SweepConfig, convention: str | None = None,
               velocity: float | None = None) -> Fig2Sweep:
    """Sweep absorption at ``velocity`` (default: the peak of the exact dwell).

    The peak is the global maximum of the exact average dwell on the
    configured velocity grid.
    """
    convention = convention or cfg.convention
    pot = barrier_potential(cfg)
    if velocity is None:
        v = cfg.velocities()
        exact = [dwell_matrix(pot, cfg.mass * x, cfg.mass, hbar=cfg.hbar).average for x in v]
        velocity = float(v[int(np.argmax(exact))])
    p = cfg.mass * velocity
    delta, omega = fig2_lasers(cfg)
    rows = []
    shared = None
    if convention == "barrier-is-lightshift":
        shared = dwell_matrix(pot, p, cfg.mass, hbar=cfg.hbar).average
    for d, o in zip(delta, omega):
        laser = LaserParams.in_gamma_units(d, o, cfg.gamma, cfg.wavelength)
        rep = estimator_report(
            pot, p, cfg.mass, laser, convention=convention, exact_dwell=shared, hbar=cfg.hbar
        )
        rows.append((d, o, rep.v_imag, rep.absorption, rep.tau_approx,
                     rep.relative_error, rep.dwell_over_delay, rep.exact_dwell))
    rows.sort(key=lambda r: r[3])
    cols = [np.array(c) for c in zip(*rows)]
    return Fig2Sweep(
        velocity=velocity,
        exact_dwell=float(cols[7][0]) if shared is None else shared,
        delta_over_gamma=cols[0],
        omega_over_gamma=cols[1],
        v_imag=cols[2],
        absorption=cols[3],
        tau_approx=cols[4],
        relative_error=cols[5],
        dwell_over_delay=cols[6],
    )


def implied_gamma(cfg: SweepConfig) -> float:
    """Decay rate for which the first laser's light shift equals the barrier.

    Diagnostic only: it shows what ``gamma`` the barrier-is-lightshift
    reading presumes, next to the configured value.
    """
    d, o = cfg.lasers[0]
    shift_in_hbar_gamma = o * o / (4.0 * d)
    return cfg.barrier_height / (cfg.hbar * shift_in_hbar_gamma) if cfg.barrier_height > 0 else math.nan
