"""A Cs atom over a 2 um barrier: the dwell time is bounded.

Classically the time spent over a barrier diverges as the energy drops to
the barrier top.  Quantum mechanically the larger dwell eigenvalue has a
finite maximum.
"""
import numpy as np

from dwelltime import PiecewisePotential, cesium_defaults, dwell_bound_scan
from dwelltime.dwell import classical_dwell

particle, region, v0 = cesium_defaults()
m, l = particle.mass, region.length
pth = np.sqrt(2 * m * v0)
pot = PiecewisePotential.square(v0, l)

scan = dwell_bound_scan(pot, np.geomspace(0.05, 20, 2000) * pth, m)
print(f"barrier threshold velocity: {pth / m * 100:.3f} cm/s")
print(f"largest t_plus: {scan.sup_t_plus:.4e} s at v = {scan.argmax_p / m * 100:.4f} cm/s")
print(f"reached at an edge of the scan: {scan.at_grid_edge}")

print("\nclassical time over the barrier just above threshold:")
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    t = classical_dwell(pot, np.sqrt(2 * m * v0 * (1 + eps)), m)
    mark = "exceeds" if t > scan.sup_t_plus else "below"
    print(f"  E = (1 + {eps:g}) V0: {t:.4e} s ({mark} the quantum bound)")
