"""The hard-wall problem does not fix kappa, and the boundary slope shows it.

At a single backward angle the slope is symmetric under kappa -> 1 - kappa,
so one measurement cannot decide between the two.  A second angle breaks
the tie and kappa is recovered exactly.
"""

import math

import numpy as np

from abforces import AmbiguityError, CylinderScenario, ideal_slope, infer_kappa

sc = CylinderScenario.from_kR(4.3e-3)
angles = (math.pi, 1.3 * math.pi)

print(" kappa   slope(pi)    slope(1.3 pi)")
for kap in np.arange(0.0, 1.0, 0.1):
    s = ideal_slope(sc, kap, np.array(angles))
    print(f"  {kap:.1f}   {s[0]:.6f}     {s[1]:.6f}")

truth = 0.3
one = [(math.pi, ideal_slope(sc, truth, math.pi))]
try:
    infer_kappa(sc, one)
except AmbiguityError as exc:
    print(f"\none angle: {exc}")
two = [(p, ideal_slope(sc, truth, p)) for p in angles]
est = infer_kappa(sc, two)
print(f"two angles: kappa_hat = {est.kappa_hat:.10f} (true {truth}), residual {est.residual:.1e}")
