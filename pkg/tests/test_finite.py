import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import ive

from abforces import (
    CylinderScenario,
    InputError,
    StiffnessError,
    boundary_relation_check,
    channel_match,
    finite_psi,
    finite_slope,
    finite_slope_profile,
    ideal_slope,
    interior_logderiv,
)
from abforces.finite import RadialGrid, finite_boundary
from abforces.ideal import uniform_angles
from abforces.specfun import cylinder

from helpers import pde_residual

FIG = CylinderScenario.from_kR(4.3e-3, beta=0.2)
PHI = 1.3 * math.pi


def hard_wall_sn(nu, kR):
    cv = cylinder(nu, kR)
    return -cv.J / complex(cv.J, cv.Y)


@pytest.mark.parametrize("n", [0, 1, -3])
@pytest.mark.parametrize("v0", [1e2, 1e4, 1e8])
def test_logderiv_zero_flux_modified_bessel(n, v0):
    sc = CylinderScenario.from_kR(4.3e-3).with_barrier(v0)
    q = math.sqrt(2 * sc.V0 - sc.k**2)
    x = q * sc.R
    m = abs(n)
    # I_m'(x) = I_{m+1}(x) + (m/x) I_m(x); ive keeps the ratio finite
    expected = q * (ive(m + 1, x) / ive(m, x) + m / x)
    assert interior_logderiv(sc, n) == pytest.approx(expected, rel=1e-8)


def test_logderiv_grows_like_sqrt_v0():
    ladder = np.array([1e6, 1e7, 1e8, 1e9])
    L = [interior_logderiv(FIG.with_barrier(v), 0) for v in ladder]
    slope = np.polyfit(np.log(ladder), np.log(L), 1)[0]
    assert slope == pytest.approx(0.5, abs=0.02)


@settings(max_examples=25, deadline=None)
@given(beta=st.floats(0.0, 3.0), n=st.integers(-6, 6), logv=st.floats(0.5, 6.0))
def test_logderiv_positive_above_barrier_energy(beta, n, logv):
    sc = CylinderScenario(R=1.0, k=1.0, beta=beta, V0=10.0**logv)
    assert interior_logderiv(sc, n) > 0


def test_pole_in_riccati_variable_is_reported():
    # below the barrier energy the interior oscillates and f has a node
    sc = CylinderScenario(R=1.0, k=5.0, beta=0.1, V0=0.0)
    with pytest.raises(StiffnessError):
        interior_logderiv(sc, 0)


def test_refinement_is_stable():
    sc = FIG.with_barrier(1e8)
    coarse = interior_logderiv(sc, 2, RadialGrid(tolerance=1e-8))
    fine = interior_logderiv(sc, 2, RadialGrid(tolerance=1e-11))
    assert coarse == pytest.approx(fine, rel=1e-7)


def test_radial_grid_validation():
    with pytest.raises(InputError):
        RadialGrid(tolerance=1e-3)
    with pytest.raises(InputError):
        RadialGrid(r_start=0.5, r_end=0.1)
    with pytest.raises(InputError):
        interior_logderiv(FIG.with_barrier(1e4), 0, RadialGrid(r_end=2.0))
    with pytest.raises(InputError):
        interior_logderiv(FIG, 0)  # V0 = inf


@pytest.mark.parametrize("n", [0, -1, 2])
def test_hard_wall_limit_of_sn(n):
    sc = CylinderScenario.from_kR(1.0, beta=0.2).with_barrier(1e8)
    sol = channel_match(sc, n)
    wall = hard_wall_sn(sol.nu_out, 1.0)
    assert abs(sol.s_n - wall) <= 1e-3 * abs(wall)
    assert sol.nu_out == pytest.approx(abs(n + 0.2))
    assert sol.c_n == pytest.approx(cmath.exp(-0.5j * math.pi * sol.nu_out))


def test_hard_wall_order_of_sn():
    base = CylinderScenario.from_kR(1.0, beta=0.2)
    ladder = np.array([1e4, 1e5, 1e6, 1e7, 1e8])
    wall = hard_wall_sn(0.2, 1.0)
    err = [abs(channel_match(base.with_barrier(v), 0).s_n - wall) for v in ladder]
    order = -np.polyfit(np.log(ladder), np.log(err), 1)[0]
    assert order >= 0.4


def test_s0_approaches_hard_wall_monotonically():
    wall = hard_wall_sn(0.2, FIG.kR)
    err = [abs(channel_match(FIG.with_barrier(v), 0).s_n - wall) for v in (1e2, 1e4, 1e6, 1e8)]
    assert all(b < a for a, b in zip(err, err[1:]))


@pytest.mark.parametrize("n", [0, 1, -2, 5])
def test_channel_continuity_at_boundary(n):
    sc = CylinderScenario.from_kR(1.0, beta=0.35).with_barrier(30.0)
    sol = channel_match(sc, n)
    cv = cylinder(sol.nu_out, sc.kR)
    H, Hp = complex(cv.J, cv.Y), complex(cv.Jp, cv.Yp)
    value = cv.J + sol.s_n * H
    deriv = sc.k * (cv.Jp + sol.s_n * Hp)
    assert deriv / value == pytest.approx(sol.logderiv_L, rel=1e-9)


def test_free_wave_without_cylinder():
    sc = CylinderScenario(R=1.0, k=1.0, beta=0.0, V0=0.0)
    for n in (0, 3, -2):
        assert channel_match(sc, n).s_n == 0
    for r, phi in ((0.4, 0.3), (1.0, 2.0), (2.5, 4.0)):
        assert abs(finite_psi(sc, r, phi) - cmath.exp(1j * r * math.cos(phi))) <= 1e-9
    assert finite_slope(sc, 1.0) == pytest.approx(0.0, abs=1e-9)


def test_psi_continuous_across_boundary():
    sc = FIG.with_barrier(1e6)
    phi = np.array([0.4, PHI])
    inner = finite_psi(sc, sc.R * (1 - 1e-10), phi)
    outer = finite_psi(sc, sc.R * (1 + 1e-10), phi)
    np.testing.assert_allclose(inner, outer, rtol=1e-8)


def test_tail_decays_into_barrier_and_shrinks_with_v0():
    radii = np.linspace(0.8, 1.0, 9)
    tails = []
    for v in (1e4, 1e6, 1e8):
        mod = [abs(finite_psi(FIG.with_barrier(v), r, PHI)) for r in radii]
        assert all(b > a for a, b in zip(mod, mod[1:]))
        tails.append(mod[-1])
    assert tails[0] > tails[1] > tails[2]


def test_boundary_value_scales_like_inverse_sqrt_v0():
    ladder = np.array([1e6, 1e8])
    mod = [abs(finite_psi(FIG.with_barrier(v), FIG.R, PHI)) for v in ladder]
    exponent = math.log(mod[1] / mod[0]) / math.log(ladder[1] / ladder[0])
    assert exponent == pytest.approx(-0.5, abs=0.05)


@pytest.mark.parametrize("v0", [1e4, 1e8])
def test_slope_matches_finite_difference(v0):
    sc = FIG.with_barrier(v0)
    for phi in (0.7, PHI):
        h = 1e-6 * sc.R
        base = abs(finite_psi(sc, sc.R, phi))
        d = [(abs(finite_psi(sc, sc.R + s, phi)) - base) / s for s in (h, h / 2, h / 4)]
        r1, r2 = 2 * d[1] - d[0], 2 * d[2] - d[1]
        fd = (4 * r2 - r1) / 3
        assert finite_slope(sc, phi) == pytest.approx(fd, rel=1e-6)


def test_slope_converges_to_ideal_limit_on_angle_grid():
    angles = uniform_angles(16)
    ideal = ideal_slope(FIG, 0.2, angles)
    prev = None
    for v in (1e6, 1e8, 1e10):
        err = np.max(np.abs(finite_slope(FIG.with_barrier(v), angles) - ideal))
        if prev is not None:
            assert err < prev / 5
        prev = err
    assert prev <= 1e-3 * np.max(ideal)


def test_integer_flux_limits_agree():
    for phi in (math.pi, PHI):
        a = finite_slope(FIG.with_barrier(1e10), phi)
        b = finite_slope(FIG.with_beta(1.2).with_barrier(1e10), phi)
        assert a == pytest.approx(b, rel=1e-3)


def test_profile_matches_pointwise():
    sc = FIG.with_barrier(1e6)
    prof = finite_slope_profile(sc, uniform_angles(8))
    for phi, s in zip(prof.angles, prof.slopes):
        assert s == pytest.approx(abs(finite_slope(sc, phi)), rel=1e-12)


def test_boundary_relation():
    res = []
    for v in (1e4, 1e6, 1e8):
        sc = FIG.with_barrier(v)
        res.append(boundary_relation_check(sc, PHI))
    assert res[2] <= 1e-2 * finite_slope(FIG.with_barrier(1e8), PHI)
    assert res[0] > res[1] > res[2]
    zero_flux = CylinderScenario.from_kR(4.3e-3).with_barrier(1e8)
    assert boundary_relation_check(zero_flux, PHI) <= 1e-2 * finite_slope(zero_flux, PHI)
    with pytest.raises(InputError):
        boundary_relation_check(FIG.with_barrier(10.0), PHI)


def test_boundary_value_and_derivative_are_consistent():
    sc = FIG.with_barrier(1e6)
    value, deriv = finite_boundary(sc, PHI)
    assert value == pytest.approx(finite_psi(sc, sc.R, PHI), rel=1e-12)
    slope = (value.conjugate() * deriv).real / abs(value)
    assert slope == pytest.approx(finite_slope(sc, PHI), rel=1e-12)


@pytest.mark.parametrize("r", [0.3, 0.75, 1.2, 2.5])
def test_stationary_equation_on_polar_patch(r):
    sc = CylinderScenario(R=1.0, k=1.0, beta=0.3, V0=5.0)
    for phi in (0.5, 2.0, 4.0):
        assert pde_residual(sc, r, phi) <= 1e-4


def test_stationary_equation_detects_wrong_interior_field():
    sc = CylinderScenario(R=1.0, k=1.0, beta=0.3, V0=5.0)
    assert pde_residual(sc, 0.7, 2.0, field_sign=-1.0) > 1e-2
