"""Balance-law residuals for a bending cylinder.

The motion is given, not solved for, so the momentum residual is the body
force needed to drive it.  Supplying that force makes the residual vanish to
stencil accuracy.  The angular residual is closed by construction of the
transverse shear, and an artificial asymmetry in S^12 shows up one-to-one.
"""

import numpy as np

from gashell import balance
from gashell.case import ShellCase, manufactured_body_force
from gashell.stress import MaterialParams
from gashell.verification import shell_motion

u, t = np.array([0.3, 0.4]), 0.4
case = ShellCase(shell_motion(), MaterialParams(h=0.1))

print("unloaded momentum residual  ", balance.momentum_residual(case, u, t))
loaded = case.with_(body_force=manufactured_body_force(case), order=4)
print("with manufactured body force", balance.momentum_residual(loaded, u, t))

print("angular residual            ", balance.angular_momentum_residual(case, u, t))
print("with S^12 shifted by 0.1    ", balance.angular_momentum_residual(case.with_(s12_offset=0.1), u, t))

for dt in (1e-3, 5e-4, 2.5e-4):
    print(f"energy residual dt={dt:.1e}  ", f"{balance.energy_residual(case, u, t, dt):.3e}")
print("mass residual               ", balance.mass_residual(case, u, t, 1e-4))
