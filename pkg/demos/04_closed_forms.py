"""
Closed-form packets against the quadrature
==========================================

The stationary-phase packets keep the incident gaussian shape.  They track
the peak position well; the transmitted peak height drifts once the
dispersion of the transmitted wavenumber matters.
"""
import numpy as np

from quatwave import Kinematics, SpectralParams, default_grid, synthesize
from quatwave.approx import reflected_closed_form, transmitted_closed_form, velocities
from quatwave.metrics import refine_peak

kin = Kinematics.from_ratio(2.0)
sp = SpectralParams.for_kinematics(kin)
x = default_grid()

print("case          part          tau   dx_peak   rel_height")
for case in ("complex", "quaternionic"):
    for part in ("reflected", "transmitted"):
        for tau in (0.05, 0.10, 0.15):
            num = synthesize(sp, kin, case, part, tau, x).density()
            if part == "reflected":
                approx = np.abs(reflected_closed_form(case, kin, sp, x, tau)) ** 2
            else:
                approx = transmitted_closed_form(case, kin, sp, x, tau).norm_sq()
            x1, p1 = refine_peak(x, num)
            x2, p2 = refine_peak(x, approx)
            print(f"{case:13s} {part:12s} {tau:.2f}  {x2 - x1:+.4f}   {p2 / p1 - 1:+.4f}")

v = velocities(kin)
print(f"\nv_tra: complex {v['v_tra_c']:.3f}, quaternionic {v['v_tra_q']:.3f}, ratio {v['v_ratio']:.6f}")
