"""The velocity sweep and the absorption sweep behind the two figures.

Four laser settings share the same light shift but differ in V_I.  The
weaker the absorption, the closer tau_approx follows the exact curve.
At the dwell peak, pushing the absorption to 0.2 costs about 20%.
"""
import numpy as np

from dwelltime import SweepConfig
from dwelltime.sweeps import fig1_sweep, fig2_sweep

cfg = SweepConfig(grid_points=12)
s = fig1_sweep(cfg)
print("velocity [cm/s]  exact [s]    " + "  ".join(f"D={d:g}" .rjust(10) for d, _ in cfg.lasers))
for i, v in enumerate(s.velocity):
    errs = "  ".join(f"{e:10.2e}" for e in s.relative_error[i])
    print(f"{v * 100:14.4f}  {s.exact_dwell[i]:.4e}  {errs}")
print("(columns after 'exact' are relative errors of tau_approx)\n")

f2 = fig2_sweep(SweepConfig(fig2_points=9, fig2_ratio_min=1e-4, fig2_ratio_max=1e-2))
print(f"absorption sweep at v = {f2.velocity * 100:.4f} cm/s")
print(f"{'A':>8} {'rel. error':>11} {'dwell/delay':>12}")
for a, e, r in zip(f2.absorption, f2.relative_error, f2.dwell_over_delay):
    print(f"{a:8.4f} {e:11.4f} {r:12.3e}")
print(f"\nerror interpolated at A = 0.2: {np.interp(0.2, f2.absorption, f2.relative_error):.3f}")
