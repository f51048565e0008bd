"""Dwell-time spectra on the energy shell.

At fixed energy the dwell-time operator for a region D acts on the
two-dimensional space spanned by the left- and right-incidence scattering
states.  Its matrix there,

    M_ab = (m / |p|) * integral over D of conj(psi_a) psi_b dx,

with unit-incident-amplitude states, is Hermitian and positive; its
eigenvalues ``t_plus >= t_minus`` are the two dwell times available to a
particle of momentum ``p`` and half its trace is the usual (Buttiker)
average dwell time.  Closed forms exist for the free particle and for a
square barrier; ``dwell_matrix`` handles any real piecewise-constant
potential and serves as a cross-check of both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    AccuracyError,
    DegenerateWavenumberError,
    DivergenceError,
    DomainError,
    PoleError,
)
from .quantities import HBAR
from .scattering import PiecewisePotential, both_wavefunctions

HERMITICITY_TOL = 1e-10

# Above this |argument| cosh/sinh are evaluated with the growing exponential
# factored out.
_SCALED_ARG = 700.0


@dataclass(frozen=True)
class DwellSpectrum:
    """On-shell dwell matrix (basis: left, right incidence) and its eigenvalues."""

    momentum: float
    t_plus: float
    t_minus: float
    matrix: np.ndarray

    @property
    def average(self) -> float:
        return 0.5 * (self.t_plus + self.t_minus)

    @property
    def splitting_ratio(self) -> float:
        """``(t_plus - t_minus) / (t_plus + t_minus)``, zero when degenerate."""
        return (self.t_plus - self.t_minus) / (self.t_plus + self.t_minus)


# ---------------------------------------------------------------------------
# even functions of z = sqrt(w): sin(z)/z, cos(z) and their first differences

_SERIES_W = 1.0
_NTERMS = 14


def _series(w, first_denominator_index):
    # sum_{n>=1} (-1)**(n+1) w**(n-1) / (2n + offset)!
    out = np.zeros_like(w)
    term = np.ones_like(w)
    for n in range(1, _NTERMS + 1):
        out = out + (-1) ** (n + 1) * term / math.factorial(2 * n + first_denominator_index)
        term = term * w
    return out


def _sinc_even(w):
    """``sin(sqrt(w)) / sqrt(w)`` continued to w < 0 as ``sinh(u) / u``."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = np.abs(w) < _SERIES_W
    out[small] = 1.0 - w[small] * _series(w[small], 1)
    pos = ~small & (w > 0)
    z = np.sqrt(w[pos])
    out[pos] = np.sin(z) / z
    neg = ~small & (w < 0)
    u = np.sqrt(-w[neg])
    out[neg] = np.sinh(u) / u
    return out


def _cos_even(w):
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    pos = w >= 0
    out[pos] = np.cos(np.sqrt(w[pos]))
    out[~pos] = np.cosh(np.sqrt(-w[~pos]))
    return out


def _one_minus_sinc_over_w(w):
    """``(1 - sin(z)/z) / w`` with ``w = z**2``, regular at w = 0."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = np.abs(w) < _SERIES_W
    out[small] = _series(w[small], 1)
    big = ~small
    out[big] = (1.0 - _sinc_even(w[big])) / w[big]
    return out


def _one_minus_cos_over_w(w):
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = np.abs(w) < _SERIES_W
    out[small] = _series(w[small], 0)
    big = ~small
    out[big] = (1.0 - _cos_even(w[big])) / w[big]
    return out


def _as_positive_array(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return arr


def _unwrap(scalar_input, *arrays):
    if scalar_input:
        return tuple(float(a) for a in arrays)
    return arrays


def free_dwell_eigenvalues(p, l, m, *, hbar=HBAR, signed=False):
    """Dwell eigenvalues of a free particle in an interval of length ``l``.

    ``t_pm = (m l / |p|) (1 +- hbar sin(p l / hbar) / (p l))``.  By default the
    pair is returned sorted (``t_plus >= t_minus``); ``signed=True`` keeps the
    labels attached to the sign in front of the sine.  Works elementwise on
    arrays of momenta.

    Raises
    ------
    DivergenceError
        At ``p = 0``, where ``t_plus`` is unbounded.
    """
    scalar = np.ndim(p) == 0
    p = np.abs(np.asarray(p, dtype=float))
    if np.any(p == 0):
        raise DivergenceError("t_plus grows without bound as p -> 0")
    _as_positive_array("momentum", p)
    _as_positive_array("length", l)
    _as_positive_array("mass", m)
    classical = m * l / p
    w = (p * l / hbar) ** 2
    plus = classical * (1.0 + _sinc_even(w))
    minus = classical * w * _one_minus_sinc_over_w(w)
    if not signed:
        plus, minus = np.maximum(plus, minus), np.minimum(plus, minus)
    return _unwrap(scalar, plus, minus)


def barrier_dwell_eigenvalues(p, l, V0, m, *, hbar=HBAR, signed=False):
    """Dwell eigenvalues for a square barrier (or well) filling the region.

    Evaluates

        t_pm = 2 m l |p| (1 +- sin(l q / hbar) hbar / (l q))
               / (p**2 + q**2 +- 2 m V0 cos(l q / hbar)),   q**2 = p**2 - 2 m V0,

    through even functions of ``l q / hbar`` so it stays real (and finite at
    threshold) for ``q**2 < 0``.  Sorting and ``signed`` as in
    :func:`free_dwell_eigenvalues`.
    """
    scalar = np.ndim(p) == 0
    p = np.abs(_as_positive_array("momentum", p))
    _as_positive_array("length", l)
    _as_positive_array("mass", m)
    V0 = float(V0)
    q2 = p * p - 2.0 * m * V0
    w = q2 * (l / hbar) ** 2
    pref = 2.0 * m * l * p
    two_mv = 2.0 * m * V0

    plus = np.empty_like(p)
    minus = np.empty_like(p)
    huge = w < -(_SCALED_ARG**2)
    ok = ~huge
    if np.any(ok):
        wk = w[ok]
        num_p = 1.0 + _sinc_even(wk)
        den_p = p[ok] ** 2 + q2[ok] + two_mv * _cos_even(wk)
        den_m = 2.0 * (hbar / l) ** 2 + two_mv * _one_minus_cos_over_w(wk)
        plus[ok] = _safe_ratio(pref[ok] * num_p, den_p, p[ok])
        minus[ok] = _safe_ratio(pref[ok] * _one_minus_sinc_over_w(wk), den_m, p[ok])
    if np.any(huge):
        u = np.sqrt(-w[huge])
        e1, e2 = np.exp(-u), np.exp(-2.0 * u)
        num_p = 2.0 * e1 + (1.0 - e2) / u
        den_p = 2.0 * e1 * (p[huge] ** 2 + q2[huge]) + two_mv * (1.0 + e2)
        g1 = ((1.0 - e2) / (2.0 * u) - e1) / u**2
        g2 = ((1.0 + e2) / 2.0 - e1) / u**2
        den_m = 2.0 * (hbar / l) ** 2 * e1 + two_mv * g2
        plus[huge] = _safe_ratio(pref[huge] * num_p, den_p, p[huge])
        minus[huge] = _safe_ratio(pref[huge] * g1, den_m, p[huge])
    if not signed:
        plus, minus = np.maximum(plus, minus), np.minimum(plus, minus)
    return _unwrap(scalar, plus, minus)


def _safe_ratio(num, den, p):
    bad = (den == 0) | ~np.isfinite(den)
    if np.any(bad):
        where = float(np.asarray(p)[bad][0])
        raise PoleError(f"vanishing denominator at p={where!r}", momentum=where)
    return num / den


# ---------------------------------------------------------------------------
# numerical on-shell matrix


def _phi(z):
    """``(exp(z) - 1) / z`` with the removable point z = 0."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    nz = z != 0
    out[nz] = np.expm1(z[nz]) / z[nz]
    return out


def _segment_overlaps(fa, ba, fb, bb, k, d):
    """Closed-form integrals of conj(psi_a) psi_b over each segment."""
    kc = np.conj(k)
    t1 = np.conj(fa) * fb * _phi(1j * (k - kc) * d)
    t2 = np.conj(fa) * bb * np.exp(1j * k * d) * _phi(-1j * (k + kc) * d)
    t3 = np.conj(ba) * fb * np.exp(-1j * kc * d) * _phi(1j * (k + kc) * d)
    t4 = np.conj(ba) * bb * _phi(-1j * (kc - k) * d)
    return d * (t1 + t2 + t3 + t4)


def hermitian_eigenvalues_2x2(matrix) -> tuple[float, float]:
    """Eigenvalues (larger first) of a 2x2 Hermitian matrix, in closed form."""
    a = matrix[0, 0].real
    d = matrix[1, 1].real
    b = matrix[0, 1]
    half_tr = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(b))
    return half_tr + radius, half_tr - radius


def dwell_matrix(pot: PiecewisePotential, p: float, mass: float, *, hbar=HBAR) -> DwellSpectrum:
    """On-shell dwell matrix of a real potential at momentum ``p``.

    Integrals are done per segment in closed form, so the only error is
    rounding.

    Raises
    ------
    DomainError
        For complex potentials (the on-shell reduction is then not Hermitian).
    AccuracyError
        If the assembled matrix is not Hermitian to ``HERMITICITY_TOL``.
    """
    if not pot.is_real:
        raise DomainError("dwell_matrix requires a real potential")
    psi_l, psi_r = both_wavefunctions(pot, p, mass, hbar=hbar)
    sel = pot.in_region
    k = psi_l.k[sel]
    d = pot.widths[sel]
    fl, bl = psi_l.fwd[sel], psi_l.bwd[sel]
    fr, br = psi_r.fwd[sel], psi_r.bwd[sel]
    scale = mass / abs(p)
    m11 = scale * _segment_overlaps(fl, bl, fl, bl, k, d).sum()
    m22 = scale * _segment_overlaps(fr, br, fr, br, k, d).sum()
    m12 = scale * _segment_overlaps(fl, bl, fr, br, k, d).sum()
    m21 = scale * _segment_overlaps(fr, br, fl, bl, k, d).sum()

    norm = max(abs(m11), abs(m22))
    defect = max(abs(m11.imag), abs(m22.imag), abs(m12 - np.conj(m21)))
    if not defect <= HERMITICITY_TOL * norm:
        raise AccuracyError(
            f"dwell matrix not Hermitian at p={p!r} (defect {defect / norm:.2e})"
        )
    off = 0.5 * (m12 + np.conj(m21))
    matrix = np.array([[m11.real, off], [np.conj(off), m22.real]], dtype=complex)
    t_plus, t_minus = hermitian_eigenvalues_2x2(matrix)
    if not t_minus > 0:
        raise AccuracyError(f"non-positive dwell eigenvalue {t_minus!r} at p={p!r}")
    return DwellSpectrum(float(p), t_plus, t_minus, matrix)


def average_dwell(spec: DwellSpectrum) -> float:
    return 0.5 * (spec.t_plus + spec.t_minus)


def on_shell_expectation(spec: DwellSpectrum, coefficients) -> float:
    """Expected dwell time ``c^dagger M c`` of an on-shell superposition.

    ``coefficients`` are the amplitudes of the left- and right-incidence
    states and must be normalized.
    """
    c = np.asarray(coefficients, dtype=complex)
    if c.shape != (2,):
        raise DomainError("need exactly two coefficients")
    if abs(np.vdot(c, c).real - 1.0) > 1e-10:
        raise DomainError("coefficients must be normalized")
    return float(np.vdot(c, spec.matrix @ c).real)


on_shell_phase_invariance = on_shell_expectation


# ---------------------------------------------------------------------------
# boundedness


def classical_dwell(pot: PiecewisePotential, p: float, mass: float) -> float:
    """Time a classical particle spends crossing the region of interest.

    Only defined when the energy exceeds every step inside the region.
    """
    v = pot.values.real[pot.in_region]
    d = pot.widths[pot.in_region]
    k2 = p * p - 2.0 * mass * v
    if np.any(k2 <= 0):
        raise DomainError("classical particle does not cross the region at this energy")
    return float(np.sum(d * mass / np.sqrt(k2)))


@dataclass(frozen=True)
class BoundScan:
    sup_t_plus: float
    argmax_p: float
    at_grid_edge: bool
    classical_dwell: float
    classical_momentum: float
    t_plus: np.ndarray
    t_minus: np.ndarray


def _spectrum_nudged(pot, p, mass, hbar):
    try:
        return dwell_matrix(pot, p, mass, hbar=hbar)
    except DegenerateWavenumberError:
        return dwell_matrix(pot, p * (1 + 1e-9), mass, hbar=hbar)


def dwell_bound_scan(
    pot: PiecewisePotential,
    p_grid,
    mass: float,
    *,
    hbar=HBAR,
    refine=True,
    classical_margin=1e-3,
) -> BoundScan:
    """Largest ``t_plus`` over a momentum grid, with local refinement.

    The classical crossing time is evaluated just above the highest step,
    at ``E = (1 + classical_margin) * max V``; it grows without bound as the
    margin shrinks while the quantum supremum stays put.  ``at_grid_edge``
    flags a maximum sitting on the smallest momentum, i.e. no interior
    bound was found (free particle).
    """
    p_grid = np.sort(_as_positive_array("momentum grid", p_grid))
    specs = [_spectrum_nudged(pot, float(p), mass, hbar) for p in p_grid]
    tp = np.array([s.t_plus for s in specs])
    tm = np.array([s.t_minus for s in specs])
    i = int(np.argmax(tp))
    best_p, best_t = float(p_grid[i]), float(tp[i])
    if refine and 0 < i < p_grid.size - 1:
        res = minimize_scalar(
            lambda q: -_spectrum_nudged(pot, q, mass, hbar).t_plus,
            bounds=(float(p_grid[i - 1]), float(p_grid[i + 1])),
            method="bounded",
            options={"xatol": 1e-10 * best_p},
        )
        if -res.fun > best_t:
            best_p, best_t = float(res.x), float(-res.fun)

    vmax = float(pot.values.real[pot.in_region].max())
    if vmax > 0:
        pc = math.sqrt(2.0 * mass * (1.0 + classical_margin) * vmax)
        cl = classical_dwell(pot, pc, mass)
    else:
        pc, cl = float("nan"), float("nan")
    return BoundScan(
        sup_t_plus=best_t,
        argmax_p=best_p,
        at_grid_edge=(i == 0),
        classical_dwell=cl,
        classical_momentum=pc,
        t_plus=tp,
        t_minus=tm,
    )
