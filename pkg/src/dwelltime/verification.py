"""Self-check suite run by ``dwelltime verify``.

Each check compares independent routes to the same quantity (closed-form
eigenvalues, the numerical dwell matrix, the absorption-derivative limit)
or tests a structural property.  ``hbar_scale`` perturbs the constant used
by the closed-form side only and exists so that the suite can be shown to
fail when the two routes disagree.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .config import SweepConfig
from .dwell import (
    barrier_dwell_eigenvalues,
    dwell_bound_scan,
    dwell_matrix,
    free_dwell_eigenvalues,
)
from .operational import dwell_via_absorption_derivative, feasibility_scan
from .quantities import HBAR, cesium_defaults
from .scattering import PiecewisePotential, solve_scattering
from .sweeps import fig1_sweep, fig2_sweep


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.seconds:.2f} s): {self.detail}"


def _cs():
    particle, region, v0 = cesium_defaults()
    m, l = particle.mass, region.length
    return m, l, v0, math.sqrt(2.0 * m * v0)


def check_oracle_agreement(hbar_scale=1.0, n=200):
    m, l, v0, pth = _cs()
    pot = PiecewisePotential.square(v0, l)
    worst_eig = worst_abs = 0.0
    for p in np.geomspace(0.2, 20.0, n) * pth:
        spec = dwell_matrix(pot, p, m)
        tp, tm = barrier_dwell_eigenvalues(p, l, v0, m, hbar=HBAR * hbar_scale)
        worst_eig = max(worst_eig, abs(spec.t_plus / tp - 1), abs(spec.t_minus / tm - 1))
        lim = dwell_via_absorption_derivative(pot, p, m).value
        worst_abs = max(worst_abs, abs(lim / spec.average - 1))
    ok = worst_eig < 1e-8 and worst_abs < 1e-4
    return ok, f"analytic vs matrix {worst_eig:.1e} (<1e-8), matrix vs absorption {worst_abs:.1e} (<1e-4)"


def check_free_classical(n=20):
    m, l, _, pth = _cs()
    pot = PiecewisePotential.free(PiecewisePotential.square(1.0, l).region)
    worst = 0.0
    for p in np.geomspace(0.05, 50.0, n) * pth:
        worst = max(worst, abs(dwell_via_absorption_derivative(pot, p, m).value / (m * l / p) - 1))
    return worst < 1e-6, f"max relative deviation from m l / p: {worst:.1e} (<1e-6)"


def check_degeneracy():
    n = np.arange(1, 11)
    tp, tm = free_dwell_eigenvalues(n * np.pi, 1.0, 1.0, hbar=1.0)
    split = np.max((tp - tm) / tp)
    tp0, tm0 = free_dwell_eigenvalues(1e-3, 1.0, 1.0, hbar=1.0)
    ratio = (tp0 - tm0) / (tp0 + tm0)
    ok = split < 1e-10 and ratio > 1 - 1e-6
    return ok, f"splitting at n*pi {split:.1e} (<1e-10); splitting ratio at pl/hbar=1e-3: {ratio:.9f}"


def check_boundedness():
    m, l, v0, pth = _cs()
    pot = PiecewisePotential.square(v0, l)
    coarse = dwell_bound_scan(pot, np.geomspace(0.05, 20.0, 1000) * pth, m)
    fine = dwell_bound_scan(pot, np.geomspace(0.05, 20.0, 2000) * pth, m)
    change = abs(fine.sup_t_plus / coarse.sup_t_plus - 1)
    ok = change < 1e-3 and fine.classical_dwell > fine.sup_t_plus and not fine.at_grid_edge
    return ok, (
        f"sup t+ = {fine.sup_t_plus:.4e} s (refinement change {change:.1e}); "
        f"classical at 1.001 V0 = {fine.classical_dwell:.4e} s"
    )


def check_fig1():
    sweep = fig1_sweep(SweepConfig())
    order = np.argsort(sweep.v_imag)
    err = np.abs(sweep.relative_error[:, order])
    ordered = bool(np.all(np.diff(err, axis=1) > 0))
    best = int(order[0])
    linear = sweep.absorption[:, best] < 0.05
    worst = float(np.max(err[linear, 0])) if np.any(linear) else math.inf
    ok = ordered and worst < 0.02
    return ok, f"accuracy ordered by V_I at every velocity: {ordered}; delta=2500 curve error where A<0.05: {worst:.3f} (<0.02)"


def check_fig2():
    sweep = fig2_sweep(SweepConfig(fig2_points=81, fig2_ratio_min=1e-4, fig2_ratio_max=1e-2))
    a = sweep.absorption
    sel = np.abs(a - 0.2) <= 0.02
    err = np.interp(0.2, a, sweep.relative_error)
    ok = bool(np.any(sel)) and bool(np.all((sweep.relative_error[sel] >= 0.02) & (sweep.relative_error[sel] <= 0.6)))
    return ok, f"relative error at A=0.2: {err:.3f} (in [0.02, 0.6]) at v = {sweep.velocity * 100:.4f} cm/s"


def check_unitarity(n=1000, seed=12345):
    rng = np.random.default_rng(seed)
    worst_u = worst_p = 0.0
    for _ in range(n):
        k = rng.integers(1, 7)
        widths = rng.uniform(0.05, 1.0, k)
        values = rng.uniform(-5.0, 5.0, k)
        p = rng.uniform(0.1, 5.0)
        sol = solve_scattering(PiecewisePotential.from_widths(widths, values), p, 1.0, hbar=1.0)
        worst_u = max(worst_u, abs(sol.T_left + sol.R_left - 1), abs(sol.T_right + sol.R_right - 1))
        # amplitudes are phase-referenced to x = 0, so center the mirror image there
        sym = PiecewisePotential.from_widths(
            np.concatenate([widths, widths[::-1]]),
            np.concatenate([values, values[::-1]]),
            left=-widths.sum(),
        )
        s2 = solve_scattering(sym, p, 1.0, hbar=1.0)
        worst_p = max(worst_p, abs(s2.r_left - s2.r_right))
    ok = worst_u < 1e-10 and worst_p < 1e-10
    return ok, f"max | |t|^2+|r|^2-1 | = {worst_u:.1e}; max |r_left - r_right| (symmetric) = {worst_p:.1e}"


def check_feasibility():
    grid = np.logspace(0, 6, 61)
    count = feasibility_scan(grid * 1e3, grid * 1e3, grid * 1e3 * HBAR)
    return count == 0, f"{count} jointly feasible points on a 61^3 grid over 6 decades"


def check_classical_limit():
    m, l, v0, _ = _cs()
    p = 1e3 * HBAR / l
    tp, tm = barrier_dwell_eigenvalues(p, l, v0, m)
    r = np.array([tp, tm]) * p / (m * l)
    ok = bool(np.all((r >= 0.999) & (r <= 1.001)))
    return ok, f"t+- |p| / (m l) = {r[0]:.6f}, {r[1]:.6f} at pl/hbar = 1e3"


CHECKS = (
    ("oracle_agreement", check_oracle_agreement),
    ("free_classical_average", check_free_classical),
    ("degeneracy_and_splitting", check_degeneracy),
    ("boundedness_contrast", check_boundedness),
    ("fig1_ordering", check_fig1),
    ("fig2_anchor", check_fig2),
    ("unitarity_and_parity", check_unitarity),
    ("feasibility_impossible", check_feasibility),
    ("classical_limit", check_classical_limit),
)


def run_checks(hbar_scale=1.0) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        start = time.perf_counter()
        try:
            if fn is check_oracle_agreement:
                ok, detail = fn(hbar_scale=hbar_scale)
            else:
                ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, reported as such
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - start))
    return results
