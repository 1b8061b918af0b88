"""
Plane waves at a complex and a quaternionic step
================================================

The same step height V0 either along ``i`` (ordinary complex potential) or
along ``j`` (pure quaternionic potential).  Energy E0 = 2 V0.
"""
from quatwave import Kinematics, coefficients, matching_residual, unitarity_sum

kin = Kinematics.from_ratio(2.0, av0=100.0)
print(f"eps0 = {kin.eps0:.4f}   sigma0 = {kin.sigma0:.4f}   rho0 = {kin.rho0:.4f}")

# coefficients at the spectral peak
for case in ("complex", "quaternionic"):
    c = coefficients(case, kin, kin.eps0)
    print(f"\n{case}")
    print(f"  r = {complex(c.r):.6f}   t = {complex(c.t):.6f}")
    if case == "quaternionic":
        print(f"  r~ = {complex(c.r_tilde):.6f}   t~ = {complex(c.t_tilde):.6f}   w0 = {complex(c.w):.6f}")
    print(f"  |r|^2 = {float(c.p_ref):.6e}   transmitted = {float(c.p_tra):.6f}")
    print(f"  unitarity - 1 = {float(unitarity_sum(c)) - 1:.1e}   matching jump = {float(matching_residual(c)):.1e}")

# the quaternionic step reflects about eleven times less
rc = float(coefficients("complex", kin, kin.eps0).p_ref)
rq = float(coefficients("quaternionic", kin, kin.eps0).p_ref)
print(f"\nreflection ratio complex / quaternionic = {rc / rq:.3f}")

# and the gap grows with energy
print("\n E0/V0    |r_c|^2       |r_q|^2")
for ratio in (1.1, 1.5, 2, 3, 5, 10):
    k = Kinematics.from_ratio(ratio)
    pc = float(coefficients("complex", k, k.eps0).p_ref)
    pq = float(coefficients("quaternionic", k, k.eps0).p_ref)
    print(f"{ratio:5.1f}  {pc:.4e}   {pq:.4e}")
