"""Raising the barrier: |psi| near the cylinder and the boundary slope.

A beam with kR = 4.3e-3 meets a cylinder of flux beta = 0.2 shielded by a
barrier V0.  As V0 grows the wavefunction is squeezed out of the interior,
|psi(R)| falls like V0**-1/2, and the slope of |psi| at the surface settles
on the hard-wall value with kappa = frac(beta).
"""

import math

import numpy as np

from abforces import CylinderScenario, finite_psi, finite_slope, ideal_psi, ideal_slope

sc = CylinderScenario.from_kR(4.3e-3, beta=0.2)
phi = 1.3 * math.pi
radii = np.array([0.98, 0.99, 1.0, 1.01, 1.02, 1.05])

print("|psi| at phi = 1.3 pi, r in units of R")
print("V0/k^2     " + "".join(f"{x:>11.2f}" for x in radii))
for v in (1e4, 1e6, 1e8):
    row = [abs(finite_psi(sc.with_barrier(v), x * sc.R, phi)) for x in radii]
    print(f"{v:<10.0e} " + "".join(f"{p:11.3e}" for p in row))
hard = [0.0 if x < 1 else abs(ideal_psi(sc, 0.2, x * sc.R, phi)) for x in radii]
print(f"{'inf':<10} " + "".join(f"{p:11.3e}" for p in hard))

print("\nboundary slope d|psi|/dr at R")
ref = ideal_slope(sc, 0.2, phi)
for v in (1e4, 1e6, 1e8, 1e10):
    s = finite_slope(sc.with_barrier(v), phi)
    print(f"  V0 = {v:7.0e} k^2   slope = {s:.8f}   rel. gap to hard wall = {abs(s - ref) / ref:.1e}")
print(f"  hard wall, kappa = 0.2   slope = {ref:.8f}")
