import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abforces import CylinderScenario, InputError, RangeError, TruncationError
from abforces.ideal import (
    SlopeProfile,
    ideal_psi,
    ideal_psi_with_truncation,
    ideal_slope,
    ideal_slope_profile,
    slope_coefficients,
    slope_from_coefficients,
    uniform_angles,
)

from helpers import radial_slope_fd

KR_FIG = 4.3e-3
FIG = CylinderScenario.from_kR(KR_FIG)

# 64-term sums in 40-digit mpmath, frozen
PSI_3R = complex(0.18285598549859715, -0.05834895567199587)   # kappa=0, r=3R, phi=1.3 pi
SLOPE_02 = 0.13819092298260745                                # kappa=0.2, phi=1.3 pi
SLOPE_04 = 0.094173827266750528                               # kappa=0.4, phi=1.3 pi
SLOPE_MIRROR = 0.11212076538009864                            # kappa=0.3, phi=1.1 and its mirror
SLOPE_KR1 = 1.59098996359774                                  # kR=1, kappa=0.25, phi=2


@pytest.mark.parametrize("phi", np.linspace(0, 2 * np.pi, 9, endpoint=False))
def test_dirichlet_boundary(phi):
    assert abs(ideal_psi(FIG, 0.2, FIG.R, phi)) <= 1e-10


def test_psi_matches_summation_oracle():
    value = ideal_psi(FIG, 0.0, 3.0, 1.3 * math.pi)
    assert abs(value - PSI_3R) <= 1e-9 * abs(PSI_3R)


def _far_field_deviation(kappa, kr, phi):
    psi = ideal_psi(FIG, kappa, kr / FIG.k, phi)
    incident = cmath.exp(1j * kr * math.cos(phi) - 1j * kappa * (phi - math.pi))
    return abs(psi - incident)


@pytest.mark.parametrize("kappa", [0.0, 0.2])
def test_incident_asymptotics(kappa):
    for phi in (math.pi - 0.1, math.pi, math.pi + 0.1):
        assert _far_field_deviation(kappa, 60.0, phi) <= 0.05


def test_backward_deviation_is_the_flux_line_wave():
    # at kappa = 1/2 the remainder is dominated by the outgoing flux-line wave
    # of modulus sin(pi kappa) / sqrt(2 pi k r) in the backward direction
    for kr in (60.0, 90.0):
        expected = 1.0 / math.sqrt(2 * math.pi * kr)
        assert _far_field_deviation(0.5, kr, math.pi) == pytest.approx(expected, rel=0.02)
    assert _far_field_deviation(0.5, 90.0, math.pi) <= 0.05


def test_slope_matches_oracle_values():
    assert ideal_slope(FIG, 0.2, 1.3 * math.pi) == pytest.approx(SLOPE_02, rel=1e-12)
    assert ideal_slope(FIG, 0.4, 1.3 * math.pi) == pytest.approx(SLOPE_04, rel=1e-12)
    kr1 = CylinderScenario.from_kR(1.0)
    assert ideal_slope(kr1, 0.25, 2.0) == pytest.approx(SLOPE_KR1, rel=1e-12)


def test_slopes_differ_between_fluxes():
    a = ideal_slope(FIG, 0.2, 1.3 * math.pi)
    b = ideal_slope(FIG, 0.4, 1.3 * math.pi)
    assert a > b * 1.2


@pytest.mark.parametrize("kR", [4.3e-3, 0.5, 3.0])
@pytest.mark.parametrize("kappa", [0.0, 0.35, 0.8])
def test_slope_equals_radial_derivative(kR, kappa):
    sc = CylinderScenario.from_kR(kR)
    for phi in uniform_angles(32)[::5] + 0.05:
        exact = ideal_slope(sc, kappa, phi)
        assert radial_slope_fd(sc, kappa, phi) == pytest.approx(exact, rel=1e-6)


def test_mirror_identity():
    a = ideal_slope(FIG, 0.3, 1.1)
    b = ideal_slope(FIG, 0.7, 2 * math.pi - 1.1)
    assert a == pytest.approx(b, rel=1e-10)
    assert a == pytest.approx(SLOPE_MIRROR, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(kappa=st.floats(0.001, 0.999), phi=st.floats(0.0, 2 * math.pi - 1e-9),
       logkR=st.floats(-3.0, 0.5))
def test_mirror_identity_property(kappa, phi, logkR):
    sc = CylinderScenario.from_kR(10.0 ** logkR)
    a = ideal_slope(sc, kappa, phi)
    b = ideal_slope(sc, 1.0 - kappa, (2 * math.pi - phi) % (2 * math.pi))
    assert a == pytest.approx(b, rel=1e-10)


@pytest.mark.parametrize("kappa", [0.0, 0.5])
def test_profile_mirror_symmetric(kappa):
    prof = ideal_slope_profile(FIG, kappa, uniform_angles(256))
    mirrored = np.roll(prof.slopes[::-1], 1)  # index j -> 256 - j
    np.testing.assert_allclose(prof.slopes, mirrored, rtol=1e-10)


def test_profile_matches_pointwise_and_is_deterministic():
    angles = uniform_angles(16)
    prof = ideal_slope_profile(FIG, 0.2, angles)
    again = ideal_slope_profile(FIG, 0.2, angles)
    np.testing.assert_array_equal(prof.slopes, again.slopes)
    for phi, s in zip(prof.angles, prof.slopes):
        assert s == pytest.approx(ideal_slope(FIG, 0.2, phi), rel=1e-13)
    assert prof.n_max >= 1 and len(prof) == 16


def test_ideal_model_ignores_integer_flux():
    a = FIG.with_beta(0.2)
    b = FIG.with_beta(1.2)
    assert ideal_slope(a, 0.2, 2.0) == ideal_slope(b, 0.2, 2.0)
    assert ideal_psi(a, 0.2, 1.5, 2.0) == ideal_psi(b, 0.2, 1.5, 2.0)


def test_global_phase_leaves_modulus_unchanged():
    ch, coeffs = slope_coefficients(FIG, 0.3, 25)
    phi = uniform_angles(32)
    base = slope_from_coefficients(ch, coeffs, phi, FIG.R)
    for theta in (0.4, 2.0, -1.3):
        rotated = slope_from_coefficients(ch, coeffs * cmath.exp(1j * theta), phi, FIG.R)
        np.testing.assert_allclose(rotated, base, rtol=1e-12)
    psi = ideal_psi(FIG, 0.3, 2.0, phi)
    np.testing.assert_allclose(np.abs(psi * cmath.exp(0.7j)), np.abs(psi), rtol=1e-12)


def test_truncation_record():
    _, trunc = ideal_psi_with_truncation(FIG, 0.2, 5.0, 1.0)
    assert trunc.n_max >= 20
    assert trunc.tail_bound <= 1e-12


def test_errors():
    with pytest.raises(RangeError):
        ideal_psi(FIG, 0.2, 0.5, 0.0)
    with pytest.raises(InputError):
        ideal_slope(FIG, 1.0, 0.0)
    with pytest.raises(InputError):
        ideal_slope_profile(FIG, 0.2, [0.0, 0.0, 1.0])
    with pytest.raises(InputError):
        ideal_slope_profile(FIG, 0.2, [0.0, 7.0])
    with pytest.raises(TruncationError):
        ideal_psi(CylinderScenario.from_kR(1.0), 0.2, 400.0, 1.0)


def test_slope_profile_validation():
    with pytest.raises(InputError):
        SlopeProfile([0.0, 1.0], [0.1])
    with pytest.raises(InputError):
        SlopeProfile([0.0], [-0.1])
    with pytest.raises(InputError):
        SlopeProfile([0.0], [math.nan])
