"""Stationary 1D scattering on piecewise-constant complex potentials.

Each segment carries a pair of plane waves ``exp(+-i k_j x)`` with the local
wavenumber ``k_j = sqrt(p**2 - 2 m V_j) / hbar`` taken on the branch
``Im k_j >= 0``.  The matching conditions at every breakpoint give a 2x2
interface matrix; these are cast in scattering (reflection/transmission)
form and chained with the Redheffer star product.  Amplitudes inside a
segment are referenced to the edge towards which the wave decays, so no
exponential larger than one is ever formed, whatever the barrier opacity or
absorption strength.

Exterior amplitudes follow the plane-wave convention referenced to x = 0:

* left incidence:  ``exp(ikx) + r_left exp(-ikx)``  |  ``t_left exp(ikx)``
* right incidence: ``t_right exp(-ikx)``  |  ``exp(-ikx) + r_right exp(ikx)``

so that a vanishing potential gives ``t = 1, r = 0``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateWavenumberError, DomainError, UnitarityError
from .quantities import HBAR, RegionSpec

#: Tolerance outside [0, 1] still accepted (and clamped) for absorption.
UNITARITY_TOL = 1e-12

#: Relative size of p**2 - 2 m V_j below which a segment counts as degenerate.
DEGENERACY_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class PiecewisePotential:
    """Complex steps ``V_R - i V_I`` between consecutive breakpoints.

    The potential vanishes outside ``[breakpoints[0], breakpoints[-1]]``.
    ``region`` is the interval D in which dwell times are measured; it must
    contain every segment with a nonzero value.  On construction the grid is
    refined so that the region edges are breakpoints themselves (zero-valued
    padding segments are added where D reaches past the potential).
    """

    breakpoints: np.ndarray
    values: np.ndarray
    region: RegionSpec | None = None
    in_region: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.breakpoints, dtype=float).ravel()
        v = np.asarray(self.values, dtype=complex).ravel()
        if x.size < 2:
            raise DomainError("need at least two breakpoints")
        if v.size != x.size - 1:
            raise DomainError(
                f"{x.size} breakpoints need {x.size - 1} values, got {v.size}"
            )
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(v)):
            raise DomainError("breakpoints and values must be finite")
        if np.any(np.diff(x) <= 0):
            raise DomainError("breakpoints must be strictly increasing")
        if np.any(v.imag > 0):
            # V = V_R - i V_I with V_I >= 0, i.e. Im V <= 0
            raise DomainError("potential must be absorbing (V_I >= 0 everywhere)")

        region = self.region
        if region is None:
            region = RegionSpec(float(x[0]), float(x[-1]))
        x, v = _insert_breakpoint(x, v, region.left_edge)
        x, v = _insert_breakpoint(x, v, region.right_edge)
        mid = 0.5 * (x[:-1] + x[1:])
        inside = (mid > region.left_edge) & (mid < region.right_edge)
        if np.any((v != 0) & ~inside):
            raise DomainError("region of interest must contain every nonzero segment")

        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "region", region)
        object.__setattr__(self, "in_region", inside)

    # construction helpers -------------------------------------------------

    @classmethod
    def free(cls, region: RegionSpec) -> "PiecewisePotential":
        """Zero potential with region of interest ``region``."""
        return cls([region.left_edge, region.right_edge], [0.0], region)

    @classmethod
    def square(cls, height, width, left=0.0) -> "PiecewisePotential":
        """Single step of (complex) ``height`` on ``[left, left + width]``."""
        return cls([left, left + width], [height])

    @classmethod
    def from_widths(cls, widths: Sequence[float], values, left=0.0, region=None):
        edges = left + np.concatenate([[0.0], np.cumsum(widths)])
        return cls(edges, values, region)

    def with_values(self, values) -> "PiecewisePotential":
        return PiecewisePotential(self.breakpoints, values, self.region)

    def with_absorption(self, v_imag: float) -> "PiecewisePotential":
        """Add ``-i v_imag`` on every segment inside the region of interest."""
        if v_imag < 0:
            raise DomainError("v_imag must be non-negative")
        return self.with_values(self.values - 1j * v_imag * self.in_region)

    def with_real_shift(self, v_real: float) -> "PiecewisePotential":
        """Add the real constant ``v_real`` on every segment inside the region."""
        return self.with_values(self.values + v_real * self.in_region)

    def real_part(self) -> "PiecewisePotential":
        return self.with_values(self.values.real)

    # queries --------------------------------------------------------------

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    def max_real(self) -> float:
        return float(np.max(self.values.real))

    def is_symmetric(self, rtol=1e-12) -> bool:
        """True if the potential is mirror-symmetric about the region center."""
        c = self.region.center
        x = self.breakpoints
        scale = max(abs(x[0]), abs(x[-1]), x[-1] - x[0])
        mirrored = 2 * c - x[::-1]
        if not np.allclose(x, mirrored, rtol=0, atol=rtol * scale):
            return False
        vs = np.max(np.abs(self.values)) or 1.0
        return bool(np.allclose(self.values, self.values[::-1], rtol=0, atol=rtol * vs))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.zeros(x.shape, dtype=complex)
        out[inside] = self.values[idx[inside]]
        return out


def _insert_breakpoint(x, v, edge):
    if edge < x[0]:
        return np.concatenate([[edge], x]), np.concatenate([[0.0], v])
    if edge > x[-1]:
        return np.concatenate([x, [edge]]), np.concatenate([v, [0.0]])
    j = np.searchsorted(x, edge)
    if x[j] == edge:
        return x, v
    return np.insert(x, j, edge), np.insert(v, j - 1, v[j - 1])


class _S(NamedTuple):
    """Scattering block: outgoing = [[r, tp], [t, rp]] @ incoming."""

    r: complex
    t: complex
    tp: complex
    rp: complex


def _interface(ka: complex, kb: complex) -> _S:
    s = ka + kb
    return _S((ka - kb) / s, 2 * ka / s, 2 * kb / s, (kb - ka) / s)


def _propagation(phase: complex) -> _S:
    return _S(0j, phase, phase, 0j)


def _star(s1: _S, s2: _S) -> _S:
    """Redheffer star product: ``s1`` on the left, ``s2`` on the right."""
    d = 1.0 - s1.rp * s2.r
    t = s2.t * s1.t / d
    tp = s1.tp * s2.tp / d
    r = s1.r + s1.tp * s2.r * s1.t / d
    rp = s2.rp + s2.t * s1.rp * s2.tp / d
    return _S(r, t, tp, rp)


def local_wavenumbers(pot: PiecewisePotential, p: float, mass: float, *, hbar=HBAR):
    """Complex wavenumbers of every segment, on the branch ``Im k >= 0``."""
    k2 = p * p - 2.0 * mass * pot.values
    degenerate = np.abs(k2) <= DEGENERACY_TOL * p * p
    if np.any(degenerate):
        j = int(np.flatnonzero(degenerate)[0])
        raise DegenerateWavenumberError(
            f"energy coincides with the potential of segment {j} at p={p!r}; "
            "perturb the momentum slightly"
        )
    k = np.sqrt(k2.astype(complex)) / hbar
    return np.where(k.imag < 0, -k, k)


@dataclass(frozen=True)
class _Solution:
    """Full solution: global amplitudes and per-segment edge coefficients."""

    pot: PiecewisePotential
    momentum: float
    k0: float
    k: np.ndarray
    t_left: complex
    r_left: complex
    t_right: complex
    r_right: complex
    # coefficients [incidence, segment]: incidence 0 = left, 1 = right
    fwd: np.ndarray
    bwd: np.ndarray


def _check_momentum(p):
    if not (np.isfinite(p) and p > 0):
        raise DomainError(f"incident momentum must be positive, got {p!r}")


def _solve(pot: PiecewisePotential, p: float, mass: float, hbar: float) -> _Solution:
    _check_momentum(p)
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")
    k0 = p / hbar
    k = local_wavenumbers(pot, p, mass, hbar=hbar)
    x = pot.breakpoints
    d = np.diff(x)
    n = k.size
    phase = np.exp(1j * k * d)

    prefix = [None] * n
    prefix[0] = _interface(k0, k[0])
    for j in range(n - 1):
        prefix[j + 1] = _star(
            _star(prefix[j], _propagation(phase[j])), _interface(k[j], k[j + 1])
        )
    suffix = [None] * n
    suffix[n - 1] = _interface(k[n - 1], k0)
    for j in range(n - 2, -1, -1):
        suffix[j] = _star(
            _interface(k[j], k[j + 1]), _star(_propagation(phase[j + 1]), suffix[j + 1])
        )
    total = _star(_star(prefix[0], _propagation(phase[0])), suffix[0])

    x0, xn = x[0], x[-1]
    across = cmath.exp(1j * k0 * (x0 - xn))
    alpha = cmath.exp(1j * k0 * x0)
    delta = cmath.exp(-1j * k0 * xn)

    fwd = np.empty((2, n), dtype=complex)
    bwd = np.empty((2, n), dtype=complex)
    for j in range(n):
        pj, qj, e = prefix[j], suffix[j], phase[j]
        loop = 1.0 - pj.rp * qj.r * e * e
        a = pj.t * alpha / loop
        fwd[0, j], bwd[0, j] = a, qj.r * e * a
        b = qj.tp * delta / loop
        fwd[1, j], bwd[1, j] = pj.rp * e * b, b

    return _Solution(
        pot=pot,
        momentum=p,
        k0=k0,
        k=k,
        t_left=total.t * across,
        r_left=total.r * alpha * alpha,
        t_right=total.tp * across,
        r_right=total.rp * delta * delta,
        fwd=fwd,
        bwd=bwd,
    )


@dataclass(frozen=True)
class ScatteringSolution:
    momentum: float
    t_left: complex
    r_left: complex
    t_right: complex
    r_right: complex

    @property
    def A_left(self) -> float:
        return absorption_probability(self, "left")

    @property
    def A_right(self) -> float:
        return absorption_probability(self, "right")

    @property
    def T_left(self) -> float:
        return abs(self.t_left) ** 2

    @property
    def R_left(self) -> float:
        return abs(self.r_left) ** 2

    @property
    def T_right(self) -> float:
        return abs(self.t_right) ** 2

    @property
    def R_right(self) -> float:
        return abs(self.r_right) ** 2


def solve_scattering(
    pot: PiecewisePotential, p: float, mass: float, *, hbar: float = HBAR
) -> ScatteringSolution:
    """Transmission and reflection amplitudes at incident momentum ``p``.

    Raises
    ------
    DegenerateWavenumberError
        If ``p**2 / 2m`` coincides with the (real) value of a segment.
    """
    s = _solve(pot, p, mass, hbar)
    return ScatteringSolution(p, s.t_left, s.r_left, s.t_right, s.r_right)


def absorption_probability(sol: ScatteringSolution, incidence: str = "left") -> float:
    """``1 - |t|**2 - |r|**2`` for the given incidence side.

    Values within ``UNITARITY_TOL`` of the interval [0, 1] are clamped onto
    it; anything further out signals a numerical failure.
    """
    if incidence == "left":
        t, r = sol.t_left, sol.r_left
    elif incidence == "right":
        t, r = sol.t_right, sol.r_right
    else:
        raise ValueError(f"incidence must be 'left' or 'right', got {incidence!r}")
    a = 1.0 - (t.real**2 + t.imag**2) - (r.real**2 + r.imag**2)
    if a < -UNITARITY_TOL or a > 1.0 + UNITARITY_TOL:
        raise UnitarityError(f"absorption {a!r} outside [0, 1] at p={sol.momentum!r}")
    return min(max(a, 0.0), 1.0)


class WaveField:
    """Stationary scattering state with unit incident amplitude.

    Call it with positions to sample ``psi(x)``; ``derivative`` gives
    ``dpsi/dx``.  Segment coefficients are exposed for closed-form
    integration: on segment ``j`` of width ``d_j`` starting at ``x_j``,
    ``psi = fwd[j] exp(i k_j (x - x_j)) + bwd[j] exp(-i k_j (x - x_{j+1}))``.
    """

    def __init__(self, solution: _Solution, incidence: str):
        if incidence not in ("left", "right"):
            raise ValueError(f"incidence must be 'left' or 'right', got {incidence!r}")
        i = 0 if incidence == "left" else 1
        self.incidence = incidence
        self.potential = solution.pot
        self.momentum = solution.momentum
        self.k0 = solution.k0
        self.k = solution.k
        self.fwd = solution.fwd[i]
        self.bwd = solution.bwd[i]
        if i == 0:
            # (incoming, outgoing) exterior coefficients of exp(+ikx), exp(-ikx)
            self._left = (1.0 + 0j, solution.r_left)
            self._right = (solution.t_left, 0j)
        else:
            self._left = (0j, solution.t_right)
            self._right = (solution.r_right, 1.0 + 0j)

    def _eval(self, x, deriv: bool):
        x = np.asarray(x, dtype=float)
        xb = self.potential.breakpoints
        out = np.zeros(x.shape, dtype=complex)
        k0 = self.k0
        for mask, (cp, cm) in (
            (x < xb[0], self._left),
            (x >= xb[-1], self._right),
        ):
            xs = x[mask]
            ep, em = np.exp(1j * k0 * xs), np.exp(-1j * k0 * xs)
            out[mask] = 1j * k0 * (cp * ep - cm * em) if deriv else cp * ep + cm * em
        idx = np.searchsorted(xb, x, side="right") - 1
        inner = (idx >= 0) & (idx < self.k.size)
        j = idx[inner]
        kj = self.k[j]
        ef = np.exp(1j * kj * (x[inner] - xb[j]))
        eb = np.exp(-1j * kj * (x[inner] - xb[j + 1]))
        if deriv:
            out[inner] = 1j * kj * (self.fwd[j] * ef - self.bwd[j] * eb)
        else:
            out[inner] = self.fwd[j] * ef + self.bwd[j] * eb
        return out

    def __call__(self, x):
        return self._eval(x, deriv=False)

    def derivative(self, x):
        return self._eval(x, deriv=True)


def wavefunction(
    pot: PiecewisePotential, p: float, mass: float, incidence: str = "left", *, hbar=HBAR
) -> WaveField:
    """Position-space scattering state for ``incidence`` from 'left' or 'right'."""
    return WaveField(_solve(pot, p, mass, hbar), incidence)


def both_wavefunctions(pot, p, mass, *, hbar=HBAR) -> tuple[WaveField, WaveField]:
    s = _solve(pot, p, mass, hbar)
    return WaveField(s, "left"), WaveField(s, "right")

