"""
Gaussian packets crossing the step
==================================

Densities of the full packet for both steps, written as CSV in the same
layout as ``quatwave evolve``.  Pass a directory as the first argument
(default ``demo_out``).
"""
import sys
from pathlib import Path

from quatwave import Kinematics, SpectralParams, default_grid, total_field
from quatwave.cli import CSV_PATTERN, write_csv
from quatwave.metrics import observe

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

kin = Kinematics.from_ratio(2.0)
sp = SpectralParams.for_kinematics(kin)
x = default_grid()

# fraction of the incident norm on the right of the step
norm = observe(total_field(sp, kin, "complex", -0.15, x)).half_line_mass_neg

print("   tau    peak_c     peak_q   right (c)  right (q)")
for tau in (-0.15, -0.05, 0.0, 0.05, 0.15):
    c = total_field(sp, kin, "complex", tau, x)
    q = total_field(sp, kin, "quaternionic", tau, x)
    oc, oq = observe(c), observe(q)
    right_c, right_q = oc.half_line_mass_pos / norm, oq.half_line_mass_pos / norm
    print(f"{tau:+.2f}  {oc.peak_x:9.4f}  {oq.peak_x:9.4f}  {right_c:9.6f}  {right_q:9.6f}")
    write_csv(out / CSV_PATTERN.format(tau=tau), x, c.density(), q.density())

print(f"\nCSV files in {out}/")
