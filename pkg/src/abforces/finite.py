r"""Scattering off a cylinder with a finite barrier and an interior field.

Inside r < R the electron sees a step potential V0 and the homogeneous
field whose vector potential gives the centrifugal term
:math:`(n + \beta r^2/R^2)^2/r^2`.  Each channel's interior solution is
found from the Riccati form of the radial equation in t = ln(r/R),

.. math::
    \frac{dy}{dt} = (n + \beta\rho^2)^2 - y^2 + \rho^2 R^2 (2V_0 - k^2),
    \qquad y = r f'/f,\quad \rho = r/R,

which stays bounded where f itself grows like exp(sqrt(2 V0) r).  The
log-derivative L = y(R)/R is matched to the exterior combination
J + s_n H of order |n + beta|.  Channel values at the boundary are formed
from the Wronskian,

.. math::
    \psi_n(R) = c_n \frac{2i}{\pi R}\,\frac{1}{k H' - L H},\qquad
    \partial_r\psi_n(R) = L\,\psi_n(R),

so the small boundary value never comes out of a cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from ._series import (
    Channels,
    adaptive_truncation,
    bessel_table,
    hankel_mantissa,
    n_max_rule,
    scaled_exp,
)
from .errors import (
    DegenerateMatchError,
    InputError,
    RangeError,
    StiffnessError,
    ToleranceError,
)
from .ideal import SlopeProfile, check_angle_grid
from .scenario import CylinderScenario

# |y| beyond this is treated as a pole of the Riccati variable
_POLE = 1e8
_TINY = 1e-290
# floor for per-angle tail control, relative to the absolute series
_SLOPE_FLOOR = 1e-4
# refinement run uses the tolerance divided by this
_REFINE = 32.0


@dataclass(frozen=True)
class RadialGrid:
    """Integration range and accuracy for the interior solve.

    ``r_start`` and ``r_end`` default to 1e-6 R and R for whatever scenario
    the grid is used with.
    """

    r_start: float | None = None
    r_end: float | None = None
    tolerance: float = 1e-10

    def __post_init__(self):
        if not (0.0 < self.tolerance <= 1e-6):
            raise InputError("tolerance must lie in (0, 1e-6]")
        if self.r_start is not None and self.r_end is not None:
            if not 0.0 < self.r_start < self.r_end:
                raise InputError("need 0 < r_start < r_end")

    def bounds(self, R: float) -> tuple[float, float]:
        start = 1e-6 * R if self.r_start is None else float(self.r_start)
        end = R if self.r_end is None else float(self.r_end)
        if not math.isclose(end, R, rel_tol=1e-12):
            raise InputError(f"r_end must equal the cylinder radius {R}")
        if not 0.0 < start < R:
            raise InputError("r_start must lie in (0, R)")
        return start, R


DEFAULT_GRID = RadialGrid()


@dataclass(frozen=True)
class ChannelSolution:
    """Matched solution of one angular-momentum channel.

    Attributes
    ----------
    n : int
        Canonical angular momentum.
    nu_out : float
        Exterior Bessel order |n + beta|.
    logderiv_L : float
        f'(R)/f(R) of the interior solution.
    s_n : complex
        Coefficient of H in the exterior combination J + s_n H.
    c_n : complex
        Incident coefficient (-i)**nu_out.
    """

    n: int
    nu_out: float
    logderiv_L: float
    s_n: complex
    c_n: complex


def _require_finite(scenario: CylinderScenario):
    if not scenario.finite:
        raise InputError("finite-barrier model needs a finite V0")


def _free(scenario: CylinderScenario) -> bool:
    # no barrier and no flux: the interior is plain free space
    return scenario.V0 == 0.0 and scenario.beta == 0.0


def _key(scenario: CylinderScenario) -> CylinderScenario:
    # the interior solve does not depend on the beam density
    return replace(scenario, rho=1.0)


def _integrate(scenario, n, start, tol, dense):
    R = scenario.R
    q = (2.0 * scenario.V0 - scenario.k ** 2) * R * R
    beta = scenario.beta
    m = n.size

    def rhs(t, state):
        y = state[:m]
        rho2 = math.exp(2.0 * t)
        return np.concatenate(((n + beta * rho2) ** 2 - y * y + rho2 * q, y))

    def pole(t, state):
        return _POLE - np.max(np.abs(state[:m]))

    pole.terminal = True
    t0 = math.log(start / R)
    y0 = np.concatenate((np.abs(n), np.zeros(m)))
    sol = solve_ivp(rhs, (t0, 0.0), y0, method="DOP853", rtol=tol, atol=tol,
                    events=pole, dense_output=dense)
    if sol.status == 1 or not np.all(np.isfinite(sol.y[:, -1])):
        where = R * math.exp(sol.t[-1])
        raise StiffnessError(f"Riccati variable diverged near r = {where:.6g}")
    if sol.status != 0:
        raise StiffnessError(f"interior integration failed: {sol.message}")
    return sol


@dataclass(frozen=True)
class _Interior:
    """Interior log-derivatives and shape for a set of channels."""

    R: float
    L: np.ndarray
    _profile: object

    def ratio(self, r: float) -> np.ndarray:
        """f_n(r) / f_n(R) for 0 < r <= R."""
        return self._profile(r)


@lru_cache(maxsize=512)
def _interior(scenario: CylinderScenario, n: tuple, grid: RadialGrid) -> _Interior:
    R = scenario.R
    narr = np.asarray(n, dtype=float)
    if _free(scenario):
        nu = np.abs(narr)
        j, jp, _, _, s = _bessel_abs(nu, scenario.kR)
        if np.any(j == 0):
            raise DegenerateMatchError("interior solution vanishes at r = R")

        def profile(r):
            jr, _, _, _, sr = _bessel_abs(nu, scenario.k * r)
            return jr / j * scaled_exp(sr - s)

        return _Interior(R, scenario.k * jp / j, profile)

    start, _ = grid.bounds(R)
    tol = grid.tolerance
    sol = _integrate(scenario, narr, start, tol, dense=True)
    L = sol.y[: narr.size, -1] / R
    check = _integrate(scenario, narr, start, tol / _REFINE, dense=False)
    L_fine = check.y[: narr.size, -1] / R
    limit = 10.0 * tol * np.maximum(np.abs(L_fine), 1.0 / R)
    bad = np.abs(L - L_fine) > limit
    if np.any(bad):
        worst = int(np.argmax(np.abs(L - L_fine) / limit))
        raise ToleranceError(
            f"interior log-derivative for n={int(narr[worst])} not stable under refinement "
            f"({L[worst]!r} vs {L_fine[worst]!r})")
    m = narr.size
    u_end = sol.y[m:, -1]
    t0 = sol.t[0]

    def profile(r):
        t = math.log(r / R)
        if t < t0:
            # regular behaviour r**|n| below the integration start
            u = sol.sol(t0)[m:] + np.abs(narr) * (t - t0)
        else:
            u = sol.sol(t)[m:]
        return scaled_exp(u - u_end)

    return _Interior(R, L, profile)


def _bessel_abs(nu: np.ndarray, x: float):
    """Scaled Bessel data for integer orders |n| (free interior)."""
    from .specfun import cylinder_ladder

    top = int(np.max(nu)) + 1
    lad = cylinder_ladder(0.0, top, x)
    idx = nu.astype(int)
    return lad.j[idx], lad.jp[idx], lad.y[idx], lad.yp[idx], lad.log_scale[idx]


def interior_logderiv(scenario: CylinderScenario, n: int, grid: RadialGrid | None = None) -> float:
    """f'(R)/f(R) of the regular interior solution in channel ``n``."""
    _require_finite(scenario)
    return float(_interior(_key(scenario), (int(n),), grid or DEFAULT_GRID).L[0])


@dataclass(frozen=True)
class _Match:
    """Vectorised matching data, scaled like the Bessel tables."""

    channels: Channels
    interior: _Interior
    boundary: np.ndarray   # psi_n(R), including c_n
    sigma: np.ndarray      # s_n = sigma * exp(2 s_R)
    s_R: np.ndarray

    @property
    def L(self) -> np.ndarray:
        return self.interior.L


def _match(scenario: CylinderScenario, count: int, grid: RadialGrid) -> _Match:
    ch = Channels(scenario.beta, count)
    interior = _interior(_key(scenario), tuple(int(v) for v in ch.n), grid)
    j, jp, y, yp, s = bessel_table(ch, scenario.kR)
    h, hp = hankel_mantissa(j, jp, y, yp, s)
    L = interior.L
    k = scenario.k
    denom = k * hp - L * h
    if np.any(np.abs(denom) < _TINY) or not np.all(np.isfinite(denom)):
        raise DegenerateMatchError("matching denominator k H' - L H underflowed")
    c = ch.incident()
    if _free(scenario):
        sigma = np.zeros_like(denom)
    else:
        sigma = -(k * jp - L * j) / denom
    boundary = c * (2j / (math.pi * scenario.R)) * scaled_exp(s) / denom
    return _Match(ch, interior, boundary, sigma, s)


def channel_match(scenario: CylinderScenario, n: int, grid: RadialGrid | None = None) -> ChannelSolution:
    """Match channel ``n`` across r = R and return its coefficients."""
    _require_finite(scenario)
    grid = grid or DEFAULT_GRID
    n = int(n)
    nu = abs(n + scenario.beta)
    from .specfun import cylinder

    cv = cylinder(nu, scenario.kR)
    L = float(_interior(_key(scenario), (n,), grid).L[0])
    h = cv.j * math.exp(2.0 * cv.log_scale) + 1j * cv.y
    hp = cv.jp * math.exp(2.0 * cv.log_scale) + 1j * cv.yp
    k = scenario.k
    denom = k * hp - L * h
    if abs(denom) < _TINY or not math.isfinite(abs(denom)):
        raise DegenerateMatchError(f"matching denominator underflowed for n={n}")
    if _free(scenario):
        s_n = 0j
    else:
        with np.errstate(under="ignore"):
            s_n = complex(-(k * cv.jp - L * cv.j) / denom * np.exp(2.0 * cv.log_scale))
    return ChannelSolution(n, nu, L, s_n, complex(np.exp(-0.5j * math.pi * nu)))


def _exterior_series(scenario, r, phi, grid):
    def build(count):
        mt = _match(scenario, count, grid)
        ch = mt.channels
        if r == scenario.R:
            radial = mt.boundary
            size = np.abs(radial)
        else:
            jr, jpr, yr, ypr, sr = bessel_table(ch, scenario.k * r)
            hr, _ = hankel_mantissa(jr, jpr, yr, ypr, sr)
            c = ch.incident()
            incoming = c * jr * scaled_exp(sr)
            scattered = c * mt.sigma * hr * scaled_exp(2.0 * mt.s_R - sr)
            radial = incoming + scattered
            size = np.abs(incoming) + np.abs(scattered)
        value = np.tensordot(radial, ch.angular(phi), axes=(0, 0))
        return value, float(np.sum(size)), float(np.sum(size[-2:]))

    return adaptive_truncation(build, n_max_rule(scenario.k * r))


def _interior_series(scenario, r, phi, grid):
    def build(count):
        mt = _match(scenario, count, grid)
        terms = mt.boundary * mt.interior.ratio(r)
        value = np.tensordot(terms, mt.channels.angular(phi), axes=(0, 0))
        size = np.abs(terms)
        return value, float(np.sum(size)), float(np.sum(size[-2:]))

    return adaptive_truncation(build, n_max_rule(scenario.kR))


def finite_psi_with_truncation(scenario: CylinderScenario, r: float, phi, grid: RadialGrid | None = None):
    """Like :func:`finite_psi` but also returns the truncation record."""
    _require_finite(scenario)
    grid = grid or DEFAULT_GRID
    r = float(r)
    if not r > 0.0:
        raise RangeError("r must be > 0")
    series = _exterior_series if r >= scenario.R else _interior_series
    value, trunc = series(scenario, r, phi, grid)
    if np.ndim(value) == 0:
        value = complex(value)
    return value, trunc


def finite_psi(scenario: CylinderScenario, r: float, phi, grid: RadialGrid | None = None):
    """Wavefunction at (r, phi) on either side of the barrier edge.

    ``phi`` may be a scalar or an array; the result has the same shape.
    """
    return finite_psi_with_truncation(scenario, r, phi, grid)[0]


def _boundary_series(scenario, phi, grid):
    """psi(R, phi) and d psi/dr (R, phi) with a common truncation."""
    def build(count):
        mt = _match(scenario, count, grid)
        ang = mt.channels.angular(phi)
        d_terms = mt.L * mt.boundary
        value = np.tensordot(mt.boundary, ang, axes=(0, 0))
        deriv = np.tensordot(d_terms, ang, axes=(0, 0))
        ratio = 0.0
        for total, terms in ((value, mt.boundary), (deriv, d_terms)):
            absolute = float(np.sum(np.abs(terms)))
            if absolute == 0.0:
                continue
            retained = max(float(np.min(np.abs(total))), _SLOPE_FLOOR * absolute)
            ratio = max(ratio, float(np.sum(np.abs(terms[-2:]))) / retained)
        return (value, deriv), 1.0, ratio

    return adaptive_truncation(build, n_max_rule(scenario.kR))


def _slope_from(value, deriv):
    mod = np.abs(value)
    with np.errstate(invalid="ignore", divide="ignore"):
        slope = np.real(np.conj(value) * deriv) / mod
    return np.where(mod > 0, slope, np.abs(deriv))


def finite_boundary(scenario: CylinderScenario, phi, grid: RadialGrid | None = None):
    """``(psi(R, phi), d psi/dr(R, phi))`` from the matched series."""
    _require_finite(scenario)
    (value, deriv), _ = _boundary_series(scenario, phi, grid or DEFAULT_GRID)
    return value, deriv


def finite_slope(scenario: CylinderScenario, phi, grid: RadialGrid | None = None):
    """Radial slope of |psi| just outside r = R (scalar or array ``phi``).

    Computed as Re(conj(psi) psi')/|psi|; where psi vanishes exactly the
    modulus of psi' is returned instead.
    """
    value, deriv = finite_boundary(scenario, phi, grid)
    slope = _slope_from(value, deriv)
    return float(slope) if np.ndim(slope) == 0 else slope


def finite_slope_profile(scenario: CylinderScenario, angles, grid: RadialGrid | None = None) -> SlopeProfile:
    """:func:`finite_slope` on a strictly increasing grid in [0, 2 pi).

    Slopes can dip below zero at finite V0 where |psi| has a local minimum
    at the boundary; the profile stores their absolute value, which is what
    the force integrand uses.
    """
    _require_finite(scenario)
    angles = check_angle_grid(angles)
    (value, deriv), trunc = _boundary_series(scenario, angles, grid or DEFAULT_GRID)
    return SlopeProfile(angles, np.abs(_slope_from(value, deriv)), trunc.n_max)


def boundary_relation_check(scenario: CylinderScenario, phi, grid: RadialGrid | None = None) -> float:
    """Residual |sqrt(V0) |psi(R)| - slope / sqrt(2)| of the large-barrier relation."""
    _require_finite(scenario)
    if scenario.V0 < 1e3 * scenario.k ** 2:
        raise InputError("boundary relation needs V0 >= 1e3 k**2")
    value, deriv = finite_boundary(scenario, phi, grid)
    slope = _slope_from(value, deriv)
    out = np.abs(math.sqrt(scenario.V0) * np.abs(value) - slope / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


__all__ = [
    "ChannelSolution",
    "RadialGrid",
    "boundary_relation_check",
    "channel_match",
    "finite_boundary",
    "finite_psi",
    "finite_psi_with_truncation",
    "finite_slope",
    "finite_slope_profile",
    "interior_logderiv",
]
