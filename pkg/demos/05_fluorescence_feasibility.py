"""Why photon counting cannot resolve the two dwell eigenvalues.

Two requirements pull in opposite directions: photons must arrive faster
than the mode spacing hbar / E, and the atom's energy must dwarf the Rabi
energy hbar Omega.  The product of the two ratios is at most 1/(2 sqrt 2),
so they cannot both be large.
"""
import numpy as np

from dwelltime import HBAR, LaserParams, fluorescence_feasibility
from dwelltime.operational import feasibility_ratios, feasibility_scan

laser = LaserParams(gamma=3.3e7, omega=1e7, delta=1e9)
for energy in np.logspace(-30, -24, 4):
    rep = fluorescence_feasibility(energy, laser)
    print(f"E = {energy:.1e} J: mode-spacing ratio {rep.mode_spacing_ratio:9.3e}, "
          f"E / hbar Omega {rep.rabi_energy_ratio:9.3e}, feasible {rep.feasible}")

grid = np.logspace(3, 9, 61)
g, o, e = np.meshgrid(grid, grid, grid * HBAR, indexing="ij", sparse=True)
c1, c2, _ = feasibility_ratios(e, g, o)
print(f"\nlargest c1 * c2 on the grid: {np.max(c1 * c2):.4f} (bound {1 / (2 * np.sqrt(2)):.4f})")
print(f"jointly feasible points: {feasibility_scan(grid, grid, grid * HBAR)} of {grid.size ** 3}")
