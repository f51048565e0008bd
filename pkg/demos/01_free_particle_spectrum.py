"""Dwell-time eigenvalues of a free particle crossing a strip.

In natural units (hbar = m = l = 1) the two on-shell eigenvalues are
(1 +- |sin p| / p) / p.  They coincide whenever p is a multiple of pi and
split apart completely as p -> 0, where the spectrum becomes bimodal.
"""
import numpy as np

from dwelltime import PiecewisePotential, RegionSpec, dwell_matrix, free_dwell_eigenvalues

p = np.array([1e-3, 1e-2, 0.1, 0.5, 1.0, np.pi / 2, np.pi, 2 * np.pi, 10.0])
tp, tm = free_dwell_eigenvalues(p, 1.0, 1.0, hbar=1.0)

print(f"{'p l / hbar':>12} {'t_plus':>12} {'t_minus':>12} {'average':>12} {'splitting':>10}")
for x, a, b in zip(p, tp, tm):
    print(f"{x:12.5g} {a:12.6g} {b:12.6g} {(a + b) / 2:12.6g} {(a - b) / (a + b):10.6f}")

# the average is always the classical crossing time m l / p
assert np.allclose((tp + tm) / 2, 1 / p)

# the same numbers from the numerical dwell matrix
pot = PiecewisePotential.free(RegionSpec(0.0, 1.0))
spec = dwell_matrix(pot, np.pi / 2, 1.0, hbar=1.0)
print("\ndwell matrix at p = pi/2:")
print(np.array2string(spec.matrix, precision=6))
print(f"eigenvalues {spec.t_plus:.6f}, {spec.t_minus:.6f}")
