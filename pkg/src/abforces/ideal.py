r"""Scattering off an impenetrable cylinder with an exterior dummy field.

The exterior Hamiltonian carries a curl-free vector potential
:math:`\kappa/r\,\mathbf e_\varphi` with :math:`0 \le \kappa < 1`.  The
stationary solution for a beam along +x with Dirichlet data on r = R is

.. math::
    \psi(r, \varphi) = \sum_n (-i)^{\nu_n} e^{i n(\varphi+\pi)}
        \Big[J_{\nu_n}(kr) - \frac{J_{\nu_n}(kR)}{H_{\nu_n}(kR)} H_{\nu_n}(kr)\Big],
    \qquad \nu_n = |n + \kappa|,

and, because the bracket's r-derivative at R collapses through the
Wronskian, the boundary slope of the modulus is

.. math::
    \partial_r|\psi|(R, \varphi) = \frac{2}{\pi R}
        \Big|\sum_n \frac{(-i)^{\nu_n}}{H_{\nu_n}(kR)} e^{i n(\varphi+\pi)}\Big|.

H is the outgoing Hankel function :math:`H^{(1)}`.  Only ``kappa`` enters;
``scenario.beta`` and ``scenario.V0`` are ignored here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._series import (
    Channels,
    SeriesTruncation,
    adaptive_truncation,
    bessel_table,
    hankel_mantissa,
    n_max_rule,
    scaled_exp,
)
from .errors import InputError, RangeError
from .scenario import CylinderScenario

TWO_PI = 2.0 * math.pi
# floor for the per-angle tail criterion, relative to the absolute series
_SLOPE_FLOOR = 1e-4


@dataclass(frozen=True)
class SlopeProfile:
    """Boundary slopes d|psi|/dr at r = R sampled on an angle grid."""

    angles: np.ndarray
    slopes: np.ndarray
    n_max: int = field(default=0, compare=False)

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        slopes = np.asarray(self.slopes, dtype=float)
        if angles.shape != slopes.shape:
            raise InputError("angles and slopes must have the same length")
        if not np.all(np.isfinite(slopes)) or np.any(slopes < 0):
            raise InputError("slopes must be finite and non-negative")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "slopes", slopes)

    def __len__(self):
        return len(self.angles)


def check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not (math.isfinite(kappa) and 0.0 <= kappa < 1.0):
        raise InputError(f"kappa must lie in [0, 1), got {kappa!r}")
    return kappa


def check_angle_grid(angles) -> np.ndarray:
    angles = np.asarray(angles, dtype=float)
    if angles.ndim != 1 or angles.size == 0:
        raise InputError("angle grid must be a non-empty 1-d sequence")
    if np.any(angles < 0) or np.any(angles >= TWO_PI):
        raise InputError("angles must lie in [0, 2 pi)")
    if np.any(np.diff(angles) <= 0):
        raise InputError("angle grid must be strictly increasing")
    return angles


def uniform_angles(n: int) -> np.ndarray:
    """``n`` equally spaced angles 2 pi j / n."""
    return TWO_PI * np.arange(n) / n


def radial_factors(channels: Channels, scenario: CylinderScenario, r: float):
    """Per-channel bracket ``J(kr) - J(kR) H(kr) / H(kR)`` and its size.

    The size is ``|J(kr)| + |J(kR) H(kr)/H(kR)|``, used for tail control
    because the bracket itself vanishes at r = R.
    """
    kR = scenario.kR
    jR, jpR, yR, ypR, sR = bessel_table(channels, kR)
    hR, _ = hankel_mantissa(jR, jpR, yR, ypR, sR)
    if r == scenario.R:
        jr, hr, sr = jR, hR, sR
    else:
        jr, jpr, yr, ypr, sr = bessel_table(channels, scenario.k * r)
        hr, _ = hankel_mantissa(jr, jpr, yr, ypr, sr)
    incoming = jr * scaled_exp(sr)
    scattered = jR * hr / hR * scaled_exp(2.0 * sR - sr)
    return incoming - scattered, np.abs(incoming) + np.abs(scattered)


def _psi_series(scenario, kappa, r, phi):
    def build(count):
        ch = Channels(kappa, count)
        radial, size = radial_factors(ch, scenario, r)
        coeff = ch.incident() * radial
        value = np.tensordot(coeff, ch.angular(phi), axes=(0, 0))
        return value, float(np.sum(size)), float(np.sum(size[-2:]))

    return adaptive_truncation(build, n_max_rule(scenario.k * r))


def ideal_psi_with_truncation(scenario: CylinderScenario, kappa: float, r: float, phi):
    """Like :func:`ideal_psi` but also returns the :class:`SeriesTruncation`."""
    kappa = check_kappa(kappa)
    if not r >= scenario.R:
        raise RangeError(f"r={r!r} lies inside the cylinder (R={scenario.R})")
    value, trunc = _psi_series(scenario, kappa, float(r), phi)
    if np.ndim(value) == 0:
        value = complex(value)
    return value, trunc


def ideal_psi(scenario: CylinderScenario, kappa: float, r: float, phi):
    """Scattering wavefunction at (r, phi), r >= R.

    ``phi`` may be a scalar or an array; the result has the same shape.
    """
    return ideal_psi_with_truncation(scenario, kappa, r, phi)[0]


def slope_coefficients(scenario: CylinderScenario, kappa: float, count: int):
    """Channels and coefficients ``(-i)**nu / H_nu(kR)`` of the slope sum."""
    ch = Channels(check_kappa(kappa), count)
    j, jp, y, yp, s = bessel_table(ch, scenario.kR)
    h, _ = hankel_mantissa(j, jp, y, yp, s)
    return ch, ch.incident() * scaled_exp(s) / h


def slope_from_coefficients(channels: Channels, coeffs, phi, R: float):
    """(2 / (pi R)) |sum_n coeffs_n exp(i n (phi + pi))|."""
    total = np.tensordot(coeffs, channels.angular(phi), axes=(0, 0))
    return 2.0 / (math.pi * R) * np.abs(total)


def _slope_series(scenario, kappa, phi):
    def build(count):
        ch, a = slope_coefficients(scenario, kappa, count)
        total = np.tensordot(a, ch.angular(phi), axes=(0, 0))
        floor = _SLOPE_FLOOR * float(np.sum(np.abs(a)))
        retained = max(float(np.min(np.abs(total))), floor)
        return total, retained, float(np.sum(np.abs(a[-2:])))

    total, trunc = adaptive_truncation(build, n_max_rule(scenario.kR))
    return 2.0 / (math.pi * scenario.R) * np.abs(total), trunc


def ideal_slope(scenario: CylinderScenario, kappa: float, phi) -> float:
    """Boundary slope of |psi| at angle ``phi`` (scalar or array)."""
    slope, _ = _slope_series(scenario, check_kappa(kappa), phi)
    return float(slope) if np.ndim(slope) == 0 else slope


def ideal_slope_profile(scenario: CylinderScenario, kappa: float, angles) -> SlopeProfile:
    """:func:`ideal_slope` on a strictly increasing grid in [0, 2 pi)."""
    angles = check_angle_grid(angles)
    slopes, trunc = _slope_series(scenario, check_kappa(kappa), angles)
    return SlopeProfile(angles, slopes, trunc.n_max)


__all__ = [
    "SeriesTruncation",
    "SlopeProfile",
    "ideal_psi",
    "ideal_psi_with_truncation",
    "ideal_slope",
    "ideal_slope_profile",
    "slope_coefficients",
    "slope_from_coefficients",
    "uniform_angles",
]
