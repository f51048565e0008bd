"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
to see the lines.  Tolerances and runtime budgets are the contractual ones.
"""
import time

import numpy as np
import pytest

from dwelltime import (
    HBAR,
    PiecewisePotential,
    RegionSpec,
    SweepConfig,
    barrier_dwell_eigenvalues,
    cesium_defaults,
    dwell_bound_scan,
    dwell_matrix,
    dwell_via_absorption_derivative,
    feasibility_scan,
    free_dwell_eigenvalues,
    solve_scattering,
)
from dwelltime.dwell import classical_dwell
from dwelltime.sweeps import fig1_sweep, fig2_sweep

RESULTS = {}


def _cs():
    particle, region, v0 = cesium_defaults()
    m, l = particle.mass, region.length
    return m, l, v0, np.sqrt(2 * m * v0)


def report(n, ok, detail, seconds):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n} ({seconds:.2f} s): {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def criterion_1():
    m, l, v0, pth = _cs()
    pot = PiecewisePotential.square(v0, l)
    eig = avg = 0.0
    for p in np.geomspace(0.2, 20, 200) * pth:
        spec = dwell_matrix(pot, p, m)
        tp, tm = barrier_dwell_eigenvalues(p, l, v0, m)
        eig = max(eig, abs(spec.t_plus / tp - 1), abs(spec.t_minus / tm - 1))
        lim = dwell_via_absorption_derivative(pot, p, m).value
        avg = max(avg, abs(lim / ((tp + tm) / 2) - 1))
    return eig < 1e-8 and avg < 1e-4, f"three-way oracle: eigenvalues {eig:.1e} (<1e-8), average vs derivative limit {avg:.1e} (<1e-4)", 10.0


def criterion_2():
    m, l, _, pth = _cs()
    pot = PiecewisePotential.free(RegionSpec(0.0, l))
    worst = max(
        abs(dwell_via_absorption_derivative(pot, p, m).value * p / (m * l) - 1)
        for p in np.geomspace(0.05, 50, 20) * pth
    )
    return worst < 1e-6, f"free derivative limit vs m l/|p| at 20 momenta: {worst:.1e} (<1e-6)", 1.0


def criterion_3():
    n = np.arange(1, 11)
    tp, tm = free_dwell_eigenvalues(n * np.pi, 1.0, 1.0, hbar=1.0)
    split = float(np.max((tp - tm) / tp))
    x = np.array([1e-1, 1e-2, 1e-3, 1e-4])
    tp, tm = free_dwell_eigenvalues(x, 1.0, 1.0, hbar=1.0)
    ratio = (tp - tm) / (tp + tm)
    ok = split < 1e-10 and np.all(np.diff(ratio) > 0) and 1 - ratio[-1] < 1e-6
    return ok, f"splitting at n*pi {split:.1e} (<1e-10); ratio at pl/hbar=1e-1..1e-4: {', '.join(f'{r:.8f}' for r in ratio)}", None


def criterion_4():
    m, l, v0, pth = _cs()
    pot = PiecewisePotential.square(v0, l)
    coarse = dwell_bound_scan(pot, np.geomspace(0.05, 20, 1000) * pth, m)
    fine = dwell_bound_scan(pot, np.geomspace(0.05, 20, 2000) * pth, m)
    change = abs(fine.sup_t_plus / coarse.sup_t_plus - 1)
    cl = classical_dwell(pot, np.sqrt(2 * m * 1.001 * v0), m)
    ok = np.isfinite(fine.sup_t_plus) and not fine.at_grid_edge and change < 1e-3 and cl > fine.sup_t_plus
    return ok, f"sup t+ {fine.sup_t_plus:.4e} s, refinement change {change:.1e} (<1e-3); classical l/v at 1.001 V0 {cl:.4e} s", None


def criterion_5():
    cfg = SweepConfig()
    s = fig1_sweep(cfg)
    order = np.argsort(s.v_imag)
    # nominal hbar gamma Omega^2 / (8 Delta^2) in units of hbar gamma, same ordering
    nominal = np.array([o * o / (8 * d * d) for d, o in cfg.lasers])
    assert np.array_equal(np.argsort(nominal), order)
    vi = nominal[order]
    err = np.abs(s.relative_error[:, order])
    ordered = bool(np.all(np.diff(err, axis=1) > 0))
    linear = s.absorption[:, order[0]] < 0.05
    worst = float(np.max(err[linear, 0]))
    ok = ordered and bool(linear.any()) and worst < 0.02
    return ok, (
        f"error ordered by V_I ({vi[0]:.3g} .. {vi[-1]:.3g} hbar gamma) at all {err.shape[0]} velocities: {ordered}; "
        f"delta=2500 gamma curve within {worst:.4f} (<0.02) where A<0.05"
    ), None


def criterion_6():
    s = fig2_sweep(SweepConfig(fig2_points=81, fig2_ratio_min=1e-4, fig2_ratio_max=1e-2))
    band = np.abs(s.absorption - 0.2) <= 0.02
    e = s.relative_error[band]
    ok = bool(band.any()) and bool(np.all((e >= 0.02) & (e <= 0.6)))
    return ok, (
        f"{band.sum()} sweep points with A in 0.2+-0.02, relative error {e.min():.3f}..{e.max():.3f} "
        f"(in [0.02, 0.6]) at v={s.velocity * 100:.4f} cm/s"
    ), 5.0


def criterion_7():
    rng = np.random.default_rng(7)
    unit = par = 0.0
    for _ in range(1000):
        k = rng.integers(1, 7)
        w = rng.uniform(0.05, 1.0, k)
        v = rng.uniform(-5, 5, k)
        p = rng.uniform(0.1, 5.0)
        s = solve_scattering(PiecewisePotential.from_widths(w, v), p, 1.0, hbar=1.0)
        unit = max(unit, abs(s.T_left + s.R_left - 1), abs(s.T_right + s.R_right - 1))
        sym = PiecewisePotential.from_widths(np.r_[w, w[::-1]], np.r_[v, v[::-1]], left=-w.sum())
        s2 = solve_scattering(sym, p, 1.0, hbar=1.0)
        par = max(par, abs(s2.r_left - s2.r_right))
    return unit < 1e-10 and par < 1e-10, f"1000 random potentials: unitarity {unit:.1e} (<1e-10), parity {par:.1e} (<1e-10)", None


def criterion_8():
    grid = np.logspace(3, 9, 61)
    energies = np.logspace(3, 9, 61) * HBAR
    count = feasibility_scan(grid, grid, energies)
    return count == 0, f"{count} jointly feasible points on 61^3 grid, gamma, omega in 1e3..1e9 s^-1, E in 1e3..1e9 hbar s^-1", None


def criterion_9():
    m, l, v0, _ = _cs()
    p = 1e3 * HBAR / l
    r = np.array(barrier_dwell_eigenvalues(p, l, v0, m)) * p / (m * l)
    ok = bool(np.all((r >= 0.999) & (r <= 1.001)))
    return ok, f"t+ |p|/(m l) = {r[0]:.6f}, t- |p|/(m l) = {r[1]:.6f} (in [0.999, 1.001]) at pl/hbar = 1e3", None


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def evaluate(n):
    start = time.perf_counter()
    ok, detail, budget = CRITERIA[n - 1]()
    seconds = time.perf_counter() - start
    if budget is not None:
        within = seconds < budget
        detail += f"; runtime {seconds:.2f} s (<{budget:g} s)"
        ok = ok and within
    return report(n, bool(ok), detail, seconds)


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, capsys):
    with capsys.disabled():
        ok = evaluate(n)
    assert ok, RESULTS[n]


if __name__ == "__main__":
    import sys

    passed = [evaluate(n) for n in range(1, 10)]
    print(f"{sum(passed)}/9 criteria passed")
    sys.exit(0 if all(passed) else 1)
