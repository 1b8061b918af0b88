"""
Rotating a general pure-imaginary step onto j
=============================================

A step ``i V1 + j V2 + k V3`` with V1 = 0 is a pure quaternionic step
whose j-k part points in some direction.  Left-multiplying the wave
function by a unit complex phase rotates that direction onto ``j``.
"""
import cmath

import numpy as np

from quatwave import PotentialSpec, canonicalize, eval_planewave, solve_step
from quatwave.quaternion import Quaternion, complex_left_mul, norm_sq
from quatwave.step import schrodinger_residual

spec = PotentialSpec(0.0, 3.0, -4.0)
canon, alpha = canonicalize(spec)
print(f"original  v2 = {spec.v2}, v3 = {spec.v3}")
print(f"canonical v_perp = {canon.v_perp}, rotation alpha = {alpha:.6f}")

eps = 1.7 * np.sqrt(2 * spec.magnitude)
x = np.linspace(-2, 2, 9)
x = x[x != 0]

# solve on the canonical step, then rotate back
coeffs = solve_step(canon, eps)
phase = cmath.exp(-1j * alpha)
phi = complex_left_mul(phase, eval_planewave(coeffs, x))
phi_xx = complex_left_mul(phase, eval_planewave(coeffs, x, 2))
q = spec.as_quaternion()
pot = Quaternion(np.where(x > 0, q.z1, 0), np.where(x > 0, q.z2, 0))
res = schrodinger_residual(pot, eps**2 / 2, phi, phi_xx)
print(f"residual in the original equation: {res.max():.2e}")

# densities do not see the rotation
direct = norm_sq(eval_planewave(solve_step(spec, eps), x))
print(f"density difference, direct vs rotated: {np.abs(direct - norm_sq(phi)).max():.2e}")
