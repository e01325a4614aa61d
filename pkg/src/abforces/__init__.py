"""Aharonov-Bohm scattering and forces for a shielded flux cylinder.

The hard-wall model (:mod:`abforces.ideal`) carries a free dummy-field
parameter kappa; the finite-barrier model (:mod:`abforces.finite`) carries
the physical flux beta.  Boundary slopes of |psi| give the force on the
beam (:mod:`abforces.forces`), and :mod:`abforces.analysis` shows the
finite model converging to the hard wall with kappa = frac(beta).
"""

__version__ = "0.1.0"

from .analysis import (
    ConvergenceReport,
    KappaEstimate,
    convergence_study,
    flux_periodicity_check,
    infer_kappa,
)
from .errors import (
    ABForcesError,
    AmbiguityError,
    DegenerateMatchError,
    FitError,
    InputError,
    InternalError,
    ParseError,
    QuadratureError,
    RangeError,
    StiffnessError,
    ToleranceError,
    TruncationError,
    ValidationError,
)
from .finite import (
    ChannelSolution,
    RadialGrid,
    boundary_relation_check,
    channel_match,
    finite_psi,
    finite_slope,
    finite_slope_profile,
    interior_logderiv,
)
from .forces import (
    ForceVector,
    QuadratureSpec,
    force_asymptotic,
    force_finite,
    force_ideal,
    force_symmetry_report,
)
from .ideal import SeriesTruncation, SlopeProfile, ideal_psi, ideal_slope, ideal_slope_profile
from .scenario import CylinderScenario
from .specfun import bessel_j, bessel_y, cylinder, cylinder_ladder, hankel1

__all__ = [name for name in dir() if not name.startswith("_")]
