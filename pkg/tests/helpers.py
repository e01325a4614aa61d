"""Independent numerical checks shared by the test modules."""

import numpy as np

from abforces.finite import finite_psi
from abforces.ideal import ideal_psi

# fourth-order central difference weights
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def pde_residual(scenario, r, phi, h=1e-2, field_sign=1.0):
    """Residual of the stationary equation at (r, phi), relative to its terms.

    In units hbar = m = 1 the equation reads

        psi_rr + psi_r / r + (psi_pp + 2 i a psi_p - a^2 psi) / r^2
            + (k^2 - 2 V) psi = 0,

    with a = beta outside the cylinder and a = beta r^2 / R^2 inside, where
    V = V0.  Derivatives come from five-point stencils of width h R, so the
    patch must not straddle r = R.  ``field_sign = -1`` flips the interior
    vector potential, a control that must break the equation.
    """
    R = scenario.R
    inside = r < R
    a = field_sign * scenario.beta * (r / R) ** 2 if inside else scenario.beta
    V = scenario.V0 if inside else 0.0
    hr = h * R
    offsets = np.arange(-2, 3)
    radial = np.array([finite_psi(scenario, r + m * hr, phi) for m in offsets])
    angular = finite_psi(scenario, r, phi + offsets * h)
    psi = radial[2]
    psi_r = _D1 @ radial / hr
    psi_rr = _D2 @ radial / hr**2
    psi_p = _D1 @ angular / h
    psi_pp = _D2 @ angular / h**2
    terms = [psi_rr, psi_r / r, psi_pp / r**2, 2j * a * psi_p / r**2,
             -a * a * psi / r**2, (scenario.k**2 - 2 * V) * psi]
    return abs(sum(terms)) / sum(abs(t) for t in terms)


def radial_slope_fd(scenario, kappa, phi, h=1e-5):
    """One-sided Richardson-extrapolated d|psi|/dr at r = R.

    |psi| has a kink at the wall, so the difference is taken from outside:
    |psi(R + h)| / h has an error series in h, removed to second order.
    """
    R = scenario.R
    d = [abs(ideal_psi(scenario, kappa, R + s * R, phi)) / (s * R) for s in (h, h / 2, h / 4)]
    r1 = 2 * d[1] - d[0]
    r2 = 2 * d[2] - d[1]
    return (4 * r2 - r1) / 3
