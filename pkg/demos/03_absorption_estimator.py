"""Measuring the average dwell time with a weak absorber.

Switching on -i V_I inside the strip makes the atom vanish with
probability A.  For small V_I, hbar A / (2 V_I) approaches the average
dwell time; extrapolating V_I -> 0 recovers it to high accuracy.
"""
import numpy as np

from dwelltime import (
    PiecewisePotential,
    absorption,
    cesium_defaults,
    dwell_matrix,
    dwell_via_absorption_derivative,
    tau_approx,
)

particle, region, v0 = cesium_defaults()
m, l = particle.mass, region.length
pot = PiecewisePotential.square(v0, l)
p = 1.2 * np.sqrt(2 * m * v0)

exact = dwell_matrix(pot, p, m).average
print(f"exact average dwell: {exact:.6e} s\n")
print(f"{'V_I / V0':>10} {'A':>10} {'tau_approx':>14} {'rel. error':>11}")
for ratio in (1e-1, 1e-2, 1e-3, 1e-4):
    vi = ratio * v0
    a = absorption(pot, p, m, vi)
    t = tau_approx(a, vi)
    print(f"{ratio:10.0e} {a:10.4f} {t:14.6e} {(exact - t) / exact:11.2e}")

lim = dwell_via_absorption_derivative(pot, p, m)
print(f"\nextrapolated limit: {lim.value:.10e} s (error estimate {lim.error:.1e})")
print(f"relative deviation from exact: {abs(lim.value / exact - 1):.1e}")
