"""Force on the cylinder against flux, next to the small-kR law.

For kR -> 0 the normalized force tends to (-2 sin^2 pi alpha, sin 2 pi alpha).
The perpendicular part is the Aharonov-Bohm force; it dies off quickly as kR
grows while the backward push stays.
"""

import numpy as np

from abforces import CylinderScenario, force_asymptotic, force_ideal, force_symmetry_report

alphas = np.round(np.arange(0.0, 1.0, 0.125), 3)
for kR in (1e-3, 1e-1, 1.0):
    sc = CylinderScenario.from_kR(kR)
    print(f"kR = {kR:g}")
    print("  alpha      f1         f2        f1_law     f2_law")
    for a in alphas:
        f, g = force_ideal(sc, a), force_asymptotic(a)
        print(f"  {a:5.3f}  {f.f1:9.5f}  {f.f2:9.5f}  {g.f1:9.5f}  {g.f2:9.5f}")

rep = force_symmetry_report([1e-3, 1e-1, 1.0], alphas)
print(f"\nalpha -> 1 - alpha: f1 defect {rep.f1_defect:.1e}, f2 defect {rep.f2_defect:.1e}")
for kR, ratio in rep.perpendicular_ratio.items():
    print(f"  kR = {kR:g}: max |f2|/|f1| = {ratio:.2e}")
