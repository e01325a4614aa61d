"""Extrapolating the finite barrier to V0 = inf.

The slope approaches its hard-wall value like V0**-1/2.  A decade ladder
and an Aitken step recover the limit to about 1e-6, and the limit matches
the hard wall with kappa = frac(beta), so beta = 1.2 behaves like 0.2.
A second check compares fluxes that differ by one flux quantum.
"""

import math

from abforces import CylinderScenario, convergence_study, flux_periodicity_check

ladder = (1e6, 1e7, 1e8, 1e9, 1e10)
for beta in (0.2, 0.4, 1.2):
    sc = CylinderScenario.from_kR(4.3e-3, beta=beta)
    rep = convergence_study(sc, [v * sc.k ** 2 for v in ladder], phi=1.3 * math.pi)
    print(f"beta = {beta}: limit {rep.extrapolated_limit:.9f}, hard wall {rep.reference:.9f}, "
          f"rel. error {rep.relative_error:.1e}, order {rep.fitted_order:.3f}")

sc = CylinderScenario.from_kR(4.3e-3)
for v in (1e8, 1e10):
    d = flux_periodicity_check(sc.with_barrier(v), 0.2, (0, 1))
    print(f"slopes for beta = 0.2 and 1.2 at V0 = {v:.0e} k^2 differ by at most {d:.1e}")
