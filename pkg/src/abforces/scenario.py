"""Physical setup shared by the ideal and finite-barrier models.

Natural units throughout: hbar = m_e = 1, so the beam energy is E = k**2/2
and a barrier V0 is an energy in the same units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class CylinderScenario:
    """Cylinder of radius ``R`` hit by a beam of wavenumber ``k`` along +x.

    Attributes
    ----------
    R : float
        Cylinder radius.
    k : float
        Incident wavenumber.
    beta : float
        Enclosed flux in units of the flux quantum h/e.
    V0 : float
        Barrier height inside the cylinder; ``math.inf`` for the hard wall.
    rho : float
        Beam density; forces scale linearly with it.
    """

    R: float = 1.0
    k: float = 1.0
    beta: float = 0.0
    V0: float = math.inf
    rho: float = 1.0

    def __post_init__(self):
        for name in ("R", "k", "rho"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta!r}")
        if math.isnan(self.V0) or self.V0 < 0:
            raise ValueError(f"V0 must be >= 0 or inf, got {self.V0!r}")

    @classmethod
    def from_kR(cls, kR: float, **kwargs) -> "CylinderScenario":
        """Scenario with R = 1 (or the given R) and k chosen to give ``kR``."""
        R = kwargs.pop("R", 1.0)
        return cls(R=R, k=kR / R, **kwargs)

    @property
    def kR(self) -> float:
        return self.k * self.R

    @property
    def energy(self) -> float:
        return 0.5 * self.k * self.k

    @property
    def finite(self) -> bool:
        return math.isfinite(self.V0)

    def alpha(self) -> float:
        """Non-integer part of the flux ratio, in [0, 1)."""
        return self.beta - math.floor(self.beta)

    def with_barrier(self, v0_over_k2: float) -> "CylinderScenario":
        """Copy with V0 given in units of k**2."""
        return replace(self, V0=v0_over_k2 * self.k * self.k)

    def with_beta(self, beta: float) -> "CylinderScenario":
        return replace(self, beta=beta)
