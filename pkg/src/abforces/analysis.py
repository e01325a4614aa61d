"""Inference and limit studies built on the ideal and finite models.

* :func:`infer_kappa` recovers the dummy-field parameter from boundary
  slopes measured at a few angles.
* :func:`convergence_study` follows an observable up a ladder of barrier
  heights and extrapolates to V0 -> inf.
* :func:`flux_periodicity_check` compares finite-barrier slopes for fluxes
  that differ by whole flux quanta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AmbiguityError, FitError, InputError
from .finite import RadialGrid, finite_slope
from .forces import QuadratureSpec, force_finite, force_ideal
from .ideal import ideal_slope, uniform_angles
from .scenario import CylinderScenario

SCAN_STEP = 1e-3
KAPPA_XTOL = 1e-10
AMBIGUITY_RTOL = 1e-6


@dataclass(frozen=True)
class KappaEstimate:
    """Best-fitting kappa, its sum of squared slope residuals, and the angles."""

    kappa_hat: float
    residual: float
    angles_used: tuple

    def __post_init__(self):
        if not 0.0 <= self.kappa_hat < 1.0:
            raise InputError("kappa_hat must lie in [0, 1)")
        if not self.residual >= 0.0:
            raise InputError("residual must be >= 0")


@lru_cache(maxsize=64)
def _scan_table(scenario: CylinderScenario, angles: tuple) -> np.ndarray:
    grid = np.arange(0.0, 1.0, SCAN_STEP)
    return np.array([ideal_slope(scenario, kap, np.asarray(angles)) for kap in grid])


def infer_kappa(scenario: CylinderScenario, slope_samples) -> KappaEstimate:
    """Least-squares kappa from ``(phi, slope)`` samples.

    A dense scan over [0, 1) finds every local minimum of the residual,
    treating kappa as periodic; each minimum is refined with a bounded
    Brent search.  If the two best minima are equally good to within
    1e-6 of the data scale sum(slope**2), the data cannot tell them apart
    and :class:`AmbiguityError` is raised.
    """
    samples = [(float(p), float(s)) for p, s in slope_samples]
    if not samples:
        raise InputError("need at least one slope sample")
    angles = tuple(p for p, _ in samples)
    if len(set(angles)) != len(angles):
        raise InputError("sample angles must be distinct")
    data = np.array([s for _, s in samples])
    table = _scan_table(scenario, angles)
    scan = np.sum((table - data) ** 2, axis=1)

    def objective(kap):
        return float(np.sum((ideal_slope(scenario, kap % 1.0, np.asarray(angles)) - data) ** 2))

    m = scan.size
    left, right = np.roll(scan, 1), np.roll(scan, -1)
    candidates = np.flatnonzero((scan <= left) & (scan <= right) & ((scan < left) | (scan < right)))
    if candidates.size == 0:
        candidates = np.array([int(np.argmin(scan))])
    minima = []
    for i in candidates:
        lo, hi = (i - 1) * SCAN_STEP, (i + 1) * SCAN_STEP
        res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                              options={"xatol": KAPPA_XTOL})
        kap, val = (res.x % 1.0, float(res.fun))
        if scan[i] < val:
            kap, val = (i * SCAN_STEP, float(scan[i]))
        minima.append((val, kap))
    minima.sort()
    # merge twins of the same minimum found from neighbouring scan points
    distinct = [minima[0]]
    for val, kap in minima[1:]:
        if all(min(abs(kap - k0), 1.0 - abs(kap - k0)) > 2 * SCAN_STEP for _, k0 in distinct):
            distinct.append((val, kap))
    best_val, best_kap = distinct[0]
    if len(distinct) > 1:
        scale = float(np.sum(data ** 2))
        if distinct[1][0] - best_val <= AMBIGUITY_RTOL * scale:
            raise AmbiguityError(
                f"kappa = {best_kap:.6g} and {distinct[1][1]:.6g} fit the slopes equally well")
    if best_kap >= 1.0:
        best_kap = 0.0
    return KappaEstimate(float(best_kap), best_val, angles)


@dataclass(frozen=True)
class ConvergenceReport:
    """Observable along a barrier ladder and its V0 -> inf extrapolation.

    Attributes
    ----------
    ladder : tuple of (V0, value)
    extrapolated_limit : float
        Aitken extrapolation from the last three ladder points.
    fitted_order : float
        p in value ~ limit + c V0**(-p).
    reference : float
        The same observable in the hard-wall model with kappa = frac(beta).
    """

    ladder: tuple
    extrapolated_limit: float
    fitted_order: float
    reference: float

    @property
    def last_increment(self) -> float:
        return abs(self.ladder[-1][1] - self.ladder[-2][1])

    @property
    def relative_error(self) -> float:
        """|limit - reference| / |reference|."""
        return abs(self.extrapolated_limit - self.reference) / abs(self.reference)


def aitken_limit(x0: float, x1: float, x2: float) -> float:
    """Aitken delta-squared limit of a geometrically converging triple."""
    d1, d2 = x1 - x0, x2 - x1
    denom = d2 - d1
    if denom == 0.0 or d1 == 0.0 or d2 / d1 <= 0.0 or abs(d2) >= abs(d1):
        # not geometrically converging; the last point is the best guess
        return x2
    return x2 - d2 * d2 / denom


def _observable(kind, phi, component, quad, grid):
    if kind == "slope":
        return (lambda sc: finite_slope(sc, phi, grid),
                lambda sc, kap: ideal_slope(sc, kap, phi))
    if kind == "force":
        if component not in ("f1", "f2"):
            raise InputError("force component must be 'f1' or 'f2'")
        return (lambda sc: getattr(force_finite(sc, quad, grid), component),
                lambda sc, kap: getattr(force_ideal(sc, kap, quad), component))
    raise InputError(f"unknown observable {kind!r}; use 'slope' or 'force'")


def convergence_study(scenario_base: CylinderScenario, V0_ladder, observable: str = "slope",
                      phi: float = 1.3 * math.pi, component: str = "f1",
                      quad: QuadratureSpec | None = None,
                      grid: RadialGrid | None = None) -> ConvergenceReport:
    """Extrapolate a finite-barrier observable to infinite barrier height.

    Parameters
    ----------
    scenario_base : CylinderScenario
        Geometry, beam and flux; its own V0 is ignored.
    V0_ladder : sequence of float
        At least four barrier heights, strictly increasing, spanning three
        decades or more.  A geometric ladder suits the extrapolation best.
    observable : {"slope", "force"}
        Boundary slope at ``phi`` or the ``component`` of the force.
    """
    ladder = [float(v) for v in V0_ladder]
    if len(ladder) < 4:
        raise InputError("ladder needs at least 4 barrier heights")
    if any(b <= a for a, b in zip(ladder, ladder[1:])) or ladder[0] <= 0:
        raise InputError("ladder must be positive and strictly increasing")
    if ladder[-1] / ladder[0] < 1e3 * (1 - 1e-12):
        raise InputError("ladder must span at least three decades")
    finite_value, ideal_value = _observable(observable, phi, component, quad, grid)
    values = np.array([finite_value(replace(scenario_base, V0=v)) for v in ladder])
    limit = aitken_limit(*values[-3:])
    V = np.array(ladder)
    err = np.abs(values - limit)
    keep = err > 0
    if np.count_nonzero(keep) < 2:
        raise FitError("ladder values do not depart from the extrapolated limit")
    slope, intercept = np.polyfit(np.log(V[keep]), np.log(err[keep]), 1)
    order = -float(slope)
    sign = np.sign(values[0] - limit) or 1.0
    model = limit + sign * np.exp(intercept) * V ** slope
    span = float(np.ptp(values))
    misfit = float(np.max(np.abs(model - values)))
    if misfit > 0.1 * span:
        raise FitError(f"power-law fit misses by {misfit:.3g}, range is {span:.3g}")
    reference = float(ideal_value(scenario_base, scenario_base.alpha()))
    return ConvergenceReport(tuple(zip(ladder, values.tolist())), float(limit), order, reference)


def flux_periodicity_check(scenario: CylinderScenario, alpha: float, offsets,
                           angles=None, grid: RadialGrid | None = None) -> float:
    """Largest slope difference among fluxes alpha + m, m in ``offsets``.

    Slopes are taken at ``scenario.V0`` (at least 1e8 k**2) on ``angles``
    (default 16 uniform angles).  The hard-wall limit depends on alpha
    only, so the defect should shrink as V0 grows.
    """
    if not 0.0 <= alpha < 1.0:
        raise InputError("alpha must lie in [0, 1)")
    if not scenario.finite or scenario.V0 < 1e8 * scenario.k ** 2 * (1 - 1e-12):
        raise InputError("periodicity check needs V0 >= 1e8 k**2")
    offsets = sorted({int(m) for m in offsets})
    if not offsets or offsets[0] < 0:
        raise InputError("offsets must be non-negative integers")
    angles = uniform_angles(16) if angles is None else np.asarray(angles, dtype=float)
    if len(offsets) == 1:
        return 0.0
    slopes = np.array([finite_slope(scenario.with_beta(alpha + m), angles, grid) for m in offsets])
    return float(np.max(np.ptp(slopes, axis=0)))


__all__ = [
    "ConvergenceReport",
    "KappaEstimate",
    "aitken_limit",
    "convergence_study",
    "flux_periodicity_check",
    "infer_kappa",
]
