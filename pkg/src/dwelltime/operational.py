"""Measuring the average dwell time through weak absorption.

An off-resonant laser (detuning ``delta`` much larger than ``gamma`` and
``omega``) acts on a two-level atom in its ground state as the complex
potential ``V_R - i V_I`` with

    V_R = hbar omega**2 / (4 delta),   V_I = hbar gamma omega**2 / (8 delta**2).

The absorption probability ``A`` (first fluorescence photon emitted inside
the illuminated strip) grows linearly in ``V_I`` with slope ``2 <tau_D> /
hbar``, so the average dwell time follows either from the slope at
``V_I -> 0`` or, approximately, from a single measurement as
``hbar A / (2 V_I)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dwell import dwell_matrix
from .errors import AccuracyError, DomainError
from .quantities import HBAR
from .scattering import PiecewisePotential, solve_scattering

#: Default photon-count threshold: dwell / detection delay below this value.
SINGLE_PHOTON_THRESHOLD = 0.1

#: Defaults for the two fluorescence-bimodality conditions.
MODE_SPACING_THRESHOLD = 1.0
RABI_ENERGY_THRESHOLD = 10.0

CONVENTIONS = ("barrier-is-lightshift", "barrier-plus-lightshift")


@dataclass(frozen=True)
class LaserParams:
    """Two-level coupling: decay rate, Rabi frequency, detuning (all s^-1)."""

    gamma: float
    omega: float
    delta: float
    wavelength: float = 852e-9

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma!r}")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if self.delta == 0 or not math.isfinite(self.delta):
            raise DomainError("detuning must be nonzero and finite")

    @classmethod
    def in_gamma_units(cls, delta_over_gamma, omega_over_gamma, gamma, wavelength=852e-9):
        return cls(gamma, omega_over_gamma * gamma, delta_over_gamma * gamma, wavelength)

    @property
    def large_detuning(self) -> bool:
        """Whether ``|delta| > 10 max(gamma, omega)``; reported, never enforced."""
        return abs(self.delta) > 10.0 * max(self.gamma, self.omega)

    @property
    def imag_to_real_ratio(self) -> float:
        """``V_I / V_R = gamma / (2 delta)``, independent of ``omega``."""
        return self.gamma / (2.0 * self.delta)


@dataclass(frozen=True)
class EffectivePotential:
    v_real: float
    v_imag: float

    @property
    def value(self) -> complex:
        return complex(self.v_real, -self.v_imag)


def effective_potential(laser: LaserParams, *, hbar=HBAR) -> EffectivePotential:
    w2 = laser.omega**2
    return EffectivePotential(
        v_real=hbar * w2 / (4.0 * laser.delta),
        v_imag=hbar * laser.gamma * w2 / (8.0 * laser.delta**2),
    )


def detection_delay(laser: LaserParams) -> float:
    """Mean waiting time ``4 delta**2 / (omega**2 gamma)`` for the first photon."""
    return 4.0 * laser.delta**2 / (laser.omega**2 * laser.gamma)


def tau_approx(absorption: float, v_imag: float, *, hbar=HBAR) -> float:
    """Single-measurement dwell estimate ``hbar A / (2 V_I)``."""
    if not 0.0 <= absorption <= 1.0:
        raise DomainError(f"absorption must lie in [0, 1], got {absorption!r}")
    if not v_imag > 0:
        raise DomainError(f"v_imag must be positive, got {v_imag!r}")
    return hbar * absorption / (2.0 * v_imag)


def absorption(
    pot_real: PiecewisePotential, p: float, mass: float, v_imag: float,
    incidence: str = "average", *, hbar=HBAR,
) -> float:
    """Absorption probability with ``-i v_imag`` switched on inside the region.

    ``incidence`` is 'left', 'right' or 'average' (mean of the two; equals
    either one for mirror-symmetric potentials).
    """
    sol = solve_scattering(pot_real.with_absorption(v_imag), p, mass, hbar=hbar)
    if incidence == "left":
        return sol.A_left
    if incidence == "right":
        return sol.A_right
    if incidence == "average":
        return 0.5 * (sol.A_left + sol.A_right)
    raise ValueError(f"unknown incidence {incidence!r}")


# ---------------------------------------------------------------------------
# derivative limit


@dataclass(frozen=True)
class DerivativeLimit:
    value: float
    error: float
    v_imag: np.ndarray
    absorption: np.ndarray


def richardson_limit(h, f):
    """Extrapolate ``f(h)`` to ``h -> 0`` assuming a power series in ``h``.

    ``h`` must be decreasing and positive.  Returns ``(value, error)`` with
    the error taken from the last two extrapolation orders; a single sample
    is returned as is, with infinite error.
    """
    h = np.asarray(h, dtype=float)
    f = np.asarray(f, dtype=float)
    if h.size != f.size or h.size == 0:
        raise ValueError("need matching, non-empty h and f")
    if np.any(h <= 0) or np.any(np.diff(h) >= 0):
        raise DomainError("h must be positive and strictly decreasing")
    if h.size == 1:
        return float(f[0]), math.inf
    # Neville tableau evaluated at h = 0
    table = [f.copy()]
    for order in range(1, h.size):
        prev = table[-1]
        hi, lo = h[: h.size - order], h[order:]
        table.append((lo * prev[:-1] - hi * prev[1:]) / (lo - hi))
    best = table[-1][-1]
    err = abs(best - table[-2][-1])
    return float(best), float(err)


def default_v_imag_ladder(
    pot_real, p, mass, *, hbar=HBAR, target=0.1, levels=8, ratio=0.5, incidence="average",
):
    """Geometric ``V_I`` ladder whose first rung gives ``A`` close to ``target``."""
    region = pot_real.region
    v = hbar * abs(p) / (mass * region.length) * target / 2.0
    for _ in range(60):
        a = absorption(pot_real, p, mass, v, incidence, hbar=hbar)
        if a >= 0.2:
            v *= 0.25
            continue
        if a < 0.5 * target:
            v *= target / max(a, 1e-300) if a > 0 else 1e3
            continue
        break
    else:
        raise AccuracyError("could not bracket a starting V_I with A < 0.2")
    return v * ratio ** np.arange(levels)


def dwell_via_absorption_derivative(
    pot_real: PiecewisePotential,
    p: float,
    mass: float,
    v_imag_sequence=None,
    *,
    hbar=HBAR,
    incidence="average",
    rtol=1e-3,
) -> DerivativeLimit:
    """``lim_{V_I -> 0} (hbar / 2) dA / dV_I`` by Richardson extrapolation.

    ``A(0) = 0`` for a real potential, so the slope is sampled as
    ``(hbar / 2) A(V_I) / V_I`` on a decreasing ladder (default: 8 rungs,
    ratio 1/2, starting where ``A`` is about 0.1).  A one-element ladder
    gives the plain one-sided difference and skips the accuracy check.

    Raises
    ------
    AccuracyError
        If the extrapolation error exceeds ``rtol`` relative.
    """
    if not pot_real.is_real:
        raise DomainError("pot_real must be a real potential")
    if v_imag_sequence is None:
        v_imag_sequence = default_v_imag_ladder(
            pot_real, p, mass, hbar=hbar, incidence=incidence
        )
    vi = np.asarray(v_imag_sequence, dtype=float)
    a = np.array([absorption(pot_real, p, mass, v, incidence, hbar=hbar) for v in vi])
    slopes = 0.5 * hbar * a / vi
    value, err = richardson_limit(vi, slopes)
    if vi.size > 1 and not err <= rtol * abs(value):
        raise AccuracyError(
            f"derivative limit did not converge at p={p!r}: "
            f"estimate {value!r} +- {err!r}"
        )
    return DerivativeLimit(value, err, vi, a)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class EstimatorReport:
    exact_dwell: float
    tau_approx: float
    absorption: float
    relative_error: float
    delay: float
    dwell_over_delay: float
    v_real: float
    v_imag: float


def strip_potential(
    pot_real: PiecewisePotential, laser: LaserParams, *,
    convention="barrier-is-lightshift", hbar=HBAR,
) -> tuple[PiecewisePotential, float]:
    """Real part of the illuminated strip and the ``V_I`` acting on it.

    ``barrier-is-lightshift``: the barrier *is* the light shift, so its
    height fixes ``V_R`` and ``V_I = V_R gamma / (2 delta)``.
    ``barrier-plus-lightshift``: the laser's ``V_R`` adds to the barrier
    and ``V_I`` takes its absolute value from ``gamma`` in SI units.
    """
    if convention == "barrier-is-lightshift":
        height = pot_real.max_real()
        if not height > 0:
            raise DomainError("barrier-is-lightshift needs a positive barrier")
        return pot_real, height * laser.imag_to_real_ratio
    if convention == "barrier-plus-lightshift":
        eff = effective_potential(laser, hbar=hbar)
        return pot_real.with_real_shift(eff.v_real), eff.v_imag
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def estimator_report(
    pot_real: PiecewisePotential,
    p: float,
    mass: float,
    laser: LaserParams,
    *,
    convention="barrier-is-lightshift",
    incidence="average",
    exact_dwell=None,
    hbar=HBAR,
) -> EstimatorReport:
    """Compare ``tau_approx`` under ``laser`` with the exact average dwell.

    ``exact_dwell`` may be passed in to reuse a spectrum computed for the
    same real potential (it does not depend on the laser in the
    barrier-is-lightshift convention).
    """
    strip, v_imag = strip_potential(pot_real, laser, convention=convention, hbar=hbar)
    if exact_dwell is None:
        exact_dwell = dwell_matrix(strip, p, mass, hbar=hbar).average
    a = absorption(strip, p, mass, v_imag, incidence, hbar=hbar)
    approx = tau_approx(a, v_imag, hbar=hbar)
    delay = detection_delay(laser)
    return EstimatorReport(
        exact_dwell=exact_dwell,
        tau_approx=approx,
        absorption=a,
        relative_error=(exact_dwell - approx) / exact_dwell,
        delay=delay,
        dwell_over_delay=exact_dwell / delay,
        v_real=float(strip.max_real()),
        v_imag=v_imag,
    )


def single_photon_regime(exact_dwell: float, laser: LaserParams, threshold=SINGLE_PHOTON_THRESHOLD):
    """``(flag, margin)`` with ``margin = dwell / delay`` and ``flag = margin < threshold``."""
    margin = exact_dwell / detection_delay(laser)
    return margin < threshold, margin


@dataclass(frozen=True)
class FeasibilityReport:
    mode_spacing_ratio: float
    rabi_energy_ratio: float
    feasible: bool


def fluorescence_feasibility(
    energy, laser: LaserParams, *, hbar=HBAR,
    mode_threshold=MODE_SPACING_THRESHOLD, rabi_threshold=RABI_ENERGY_THRESHOLD,
) -> FeasibilityReport:
    """Check the two requirements for seeing bimodality via photon counts.

    ``mode_spacing_ratio`` compares ``hbar / E`` with the mean interval
    between fluorescence photons ``2/gamma + gamma/omega**2`` (must exceed
    ``mode_threshold``); ``rabi_energy_ratio = E / (hbar omega)`` must exceed
    ``rabi_threshold`` to avoid reflection by the laser.  Since the product
    of the two ratios never exceeds ``1 / (2 sqrt 2)``, both cannot hold at
    the default thresholds.
    """
    c1, c2, ok = feasibility_ratios(
        energy, laser.gamma, laser.omega, hbar=hbar,
        mode_threshold=mode_threshold, rabi_threshold=rabi_threshold,
    )
    return FeasibilityReport(float(c1), float(c2), bool(ok))


def feasibility_ratios(
    energy, gamma, omega, *, hbar=HBAR,
    mode_threshold=MODE_SPACING_THRESHOLD, rabi_threshold=RABI_ENERGY_THRESHOLD,
):
    """Vectorized core of :func:`fluorescence_feasibility` (broadcasts)."""
    energy = np.asarray(energy, dtype=float)
    if np.any(energy <= 0):
        raise DomainError("energy must be positive")
    gamma = np.asarray(gamma, dtype=float)
    omega = np.asarray(omega, dtype=float)
    c1 = (hbar / energy) / (2.0 / gamma + gamma / omega**2)
    c2 = energy / (hbar * omega)
    return c1, c2, (c1 > mode_threshold) & (c2 > rabi_threshold)


def feasibility_scan(gammas, omegas, energies, *, hbar=HBAR, **thresholds) -> int:
    """Number of jointly feasible points on the (gamma, omega, E) grid."""
    g, w, e = np.meshgrid(gammas, omegas, energies, indexing="ij", sparse=True)
    _, _, ok = feasibility_ratios(e, g, w, hbar=hbar, **thresholds)
    return int(np.count_nonzero(ok))
