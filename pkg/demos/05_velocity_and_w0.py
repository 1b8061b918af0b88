"""
Can a complex step imitate the quaternionic one?
================================================

Choose a complex step height W0 so that its transmitted packet moves with
the quaternionic velocity; then compare reflection probabilities.
"""
import numpy as np

from quatwave import Kinematics, SpectralParams, default_grid, synthesize
from quatwave.approx import fit_w0, fit_w0_velocity, probabilities, velocities
from quatwave.metrics import numeric_probabilities, peak_trajectory

kin = Kinematics.from_ratio(2.0)
x = default_grid()
p_q = probabilities("quaternionic", kin)[0]
v_q = velocities(kin)["v_tra_q"]
print(f"quaternionic: |r|^2 = {p_q:.4e}, v_tra = {v_q:.4f}")

for name, fit in (("fixed step scale", fit_w0(kin)), ("velocity matched", fit_w0_velocity(kin))):
    # complex step of height W0 at the same energy
    kw = Kinematics(kin.eps0, np.sqrt(2 * fit.w0))
    sp = SpectralParams.for_kinematics(kw)
    v_fit = peak_trajectory([synthesize(sp, kw, "complex", "transmitted", t, x) for t in (0.05, 0.10, 0.15)])[0]
    r_num, _ = numeric_probabilities(
        synthesize(sp, kw, "complex", "incident", -0.15, x),
        synthesize(sp, kw, "complex", "reflected", 0.15, x),
        synthesize(sp, kw, "complex", "transmitted", 0.15, x),
    )
    print(f"\n{name}: E0/W0 = {kin.e0 / fit.w0:.6f}")
    print(f"  v_tra analytic {kw.sigma0:.4f}, fitted {v_fit:.4f}")
    print(f"  |r|^2 analytic {fit.p_ref:.4e}, numeric {r_num:.4e}, ratio to quaternionic {fit.p_ref / p_q:.2f}")
