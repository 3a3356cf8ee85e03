"""Surface geometry on the built-in charts.

Prints the metric, second fundamental form and principal curvatures at a few
points, then checks that the frame-rotation bivectors agree with the
Christoffel symbols and the shape operator.
"""

import numpy as np

from gashell.surface import bivector_christoffel_table, cylinder, frames_at, plane, sphere

np.set_printoptions(precision=5, suppress=True)

for name, chart, u in [
    ("plane", plane(), (0.3, -0.2)),
    ("cylinder R=2", cylinder(2.0), (0.5, 1.0)),
    ("sphere R=1", sphere(1.0), (0.4, 0.9)),
]:
    f = frames_at(chart, np.array(u))
    print(f"{name} at {u}")
    print("  metric           ", f.metric.ravel())
    print("  second form      ", f.second_form.ravel())
    print("  curvatures       ", f.curvatures)
    print("  det G - V^2      ", np.linalg.det(f.metric) - f.volume**2)
    mismatch = np.max(np.abs(f.bivector_christoffel - bivector_christoffel_table(f)))
    print("  bivector vs table", f"{mismatch:.1e}")
    g = f.christoffel
    print("  Gamma^3_ij - B_ij", np.max(np.abs(g[2, :, :2] - f.second_form)))
