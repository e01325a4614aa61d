r"""Cylinder functions of real order.

Bessel functions :math:`J_\nu(x)`, :math:`Y_\nu(x)` and the Hankel function
:math:`H^{(1)}_\nu(x) = J_\nu(x) + i Y_\nu(x)` with their x-derivatives, for
real order :math:`0 \le \nu \le 200` and real argument
:math:`10^{-8} \le x \le 10^4`.

Algorithm
---------
All orders :math:`\mu + m`, :math:`m = 0 \dots M`, sharing a fractional base
:math:`|\mu| \le 1/2` are produced together:

* the continued fraction for :math:`J'_\nu/J_\nu` is evaluated at the top
  order (modified Lentz), and :math:`J` is recurred *downward* to :math:`\mu`;
* :math:`Y_\mu, Y_{\mu+1}` come from Temme's series for :math:`x < 2` and from
  Steed's complex continued fraction for :math:`H'_\mu/H_\mu` otherwise;
* the Wronskian fixes the normalisation of :math:`J_\mu`, and :math:`Y` is
  recurred *upward*.

Temme's series is regular at :math:`\mu = 0`, so integer orders need no
special treatment.

Scaled representation
---------------------
For small x and large order, :math:`J_\nu` underflows and :math:`Y_\nu`
overflows a double.  :class:`CylinderValue` therefore stores mantissas and a
log scale :math:`s` with

.. math::
    J = j\,e^{s}, \quad J' = j'\,e^{s}, \quad Y = y\,e^{-s}, \quad Y' = y'\,e^{-s}.

:math:`s = 0` whenever both functions are representable.  Products such as
the Wronskian :math:`J Y' - J' Y = j y' - j' y` are scale free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InternalError, RangeError

NU_MAX = 200.0
X_MIN = 1e-8
X_MAX = 1e4

_EPS = 1e-16
_TINY = 1e-300
_BIG = 1e200
_LOG_BIG = math.log(_BIG)
# |log| beyond which a value is kept in scaled form
_LOG_SAFE = 600.0
_TEMME_XMAX = 2.0

# Taylor coefficients of 1/Gamma(1+z) about z = 0
_RGAMMA1 = (
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
)


@dataclass(frozen=True)
class CylinderValue:
    """J, Y and their derivatives at one (order, argument) point.

    ``j, jp, y, yp`` are mantissas; see the module docstring for how
    ``log_scale`` relates them to the actual function values.
    """

    order: float
    argument: float
    j: float
    y: float
    jp: float
    yp: float
    log_scale: float = 0.0

    @property
    def J(self) -> float:
        return _times_exp(self.j, self.log_scale)

    @property
    def Jp(self) -> float:
        return _times_exp(self.jp, self.log_scale)

    @property
    def Y(self) -> float:
        return _times_exp(self.y, -self.log_scale)

    @property
    def Yp(self) -> float:
        return _times_exp(self.yp, -self.log_scale)

    def wronskian(self) -> float:
        """J Y' - J' Y, which should equal 2/(pi x)."""
        return self.j * self.yp - self.jp * self.y


@dataclass(frozen=True)
class CylinderLadder:
    """Cylinder functions at orders ``nu0 + m`` for a fixed argument.

    Arrays follow the same scaled convention as :class:`CylinderValue`.
    """

    argument: float
    orders: np.ndarray
    j: np.ndarray
    y: np.ndarray
    jp: np.ndarray
    yp: np.ndarray
    log_scale: np.ndarray

    def __len__(self):
        return len(self.orders)

    def __getitem__(self, m) -> CylinderValue:
        return CylinderValue(
            float(self.orders[m]), self.argument, float(self.j[m]), float(self.y[m]),
            float(self.jp[m]), float(self.yp[m]), float(self.log_scale[m]),
        )

    def hankel_mantissa(self):
        """Return ``(h, hp)`` with ``H = h exp(-s)`` and ``H' = hp exp(-s)``."""
        w = np.exp(2.0 * self.log_scale)
        return self.j * w + 1j * self.y, self.jp * w + 1j * self.yp


def _times_exp(a, log_factor):
    """a * exp(log_factor) without intermediate overflow or underflow."""
    if log_factor == 0.0 or a == 0.0:
        return a
    arg = math.log(abs(a)) + log_factor
    if arg > 709.0:
        return math.copysign(math.inf, a)
    return math.copysign(math.exp(arg), a)


def _check_argument(x):
    if not math.isfinite(x):
        raise InputError(f"argument must be finite, got {x!r}")
    if not X_MIN <= x <= X_MAX:
        raise RangeError(f"argument x={x!r} outside [{X_MIN}, {X_MAX}]")


def _check_order(nu):
    if not math.isfinite(nu):
        raise InputError(f"order must be finite, got {nu!r}")
    if not 0.0 <= nu <= NU_MAX:
        raise RangeError(f"order nu={nu!r} outside [0, {NU_MAX}]")


def _gamma_pieces(mu):
    """Temme's gamma combinations for |mu| <= 1/2.

    Returns ``(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu))`` where
    gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu) and gam2 is the mean of the two
    reciprocals.  Summing the Taylor series avoids the 0/0 at mu = 0.
    """
    gam1 = 0.0
    gam2 = 0.0
    mu2 = mu * mu
    power = 1.0
    for k in range(0, len(_RGAMMA1), 2):
        gam2 += _RGAMMA1[k] * power
        if k + 1 < len(_RGAMMA1):
            gam1 -= _RGAMMA1[k + 1] * power
        power *= mu2
    odd = -gam1 * mu
    return gam1, gam2, gam2 + odd, gam2 - odd


def _cf1(nu, x):
    """J'_nu/J_nu by Lentz's method, plus the sign of J_nu."""
    h = nu / x
    if h < _TINY:
        h = _TINY
    c = h
    d = 0.0
    sign = 1.0
    maxit = 2 * int(x) + 10000
    for i in range(1, maxit):
        b = 2.0 * (nu + i) / x
        d = b - d
        if abs(d) < _TINY:
            d = _TINY
        c = b - 1.0 / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = c * d
        h *= delta
        if d < 0.0:
            sign = -sign
        if abs(delta - 1.0) < _EPS:
            return h, sign
    raise InternalError(f"continued fraction for J'/J did not converge (nu={nu}, x={x})")


def _temme_y(mu, x):
    """Y_mu(x), Y_{mu+1}(x) from Temme's series, x < 2, |mu| <= 1/2."""
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < 1e-12 else pimu / math.sin(pimu)
    d = -math.log(x2)
    e = mu * d
    fact2 = 1.0 + e * e / 6.0 if abs(e) < 1e-6 else math.sinh(e) / e
    gam1, gam2, gampl, gammi = _gamma_pieces(mu)
    ff = 2.0 / math.pi * fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    e = math.exp(e)
    p = e / (gampl * math.pi)
    q = 1.0 / (e * math.pi * gammi)
    half = 0.5 * pimu
    fact3 = 1.0 if abs(half) < 1e-12 else math.sin(half) / half
    r = math.pi * half * fact3 * fact3
    c = 1.0
    d = -x2 * x2
    total = ff + r * q
    total1 = p
    mu2 = mu * mu
    for i in range(1, 500):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        term = c * (ff + r * q)
        total += term
        term1 = c * p - i * term
        total1 += term1
        if abs(term) < (1.0 + abs(total)) * _EPS and abs(term1) < (1.0 + abs(total1)) * _EPS:
            return -total, -total1 * 2.0 / x
    raise InternalError(f"Temme series did not converge (mu={mu}, x={x})")


def _steed_cf2(mu, x):
    """p + i q = H'_mu / H_mu for x >= 2 via Lentz on the complex fraction."""
    f = complex(_TINY)
    c = f
    d = 0j
    for j in range(1, 100000):
        a = (j - 0.5) ** 2 - mu * mu
        b = 2.0 * complex(x, j)
        d = b + a * d
        if abs(d) < _TINY:
            d = complex(_TINY)
        c = b + a / c
        if abs(c) < _TINY:
            c = complex(_TINY)
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise InternalError(f"continued fraction for H'/H did not converge (mu={mu}, x={x})")
    return complex(-0.5 / x, 1.0) + 1j / x * f


def _ladder_core(mu, top, x):
    """Raw ladder for orders mu, mu+1, ..., mu+top (|mu| <= 1/2)."""
    if top == 0:
        # the normalisation below needs J_{mu+1}
        raw = _ladder_core(mu, 1, x)
        return CylinderLadder(raw.argument, raw.orders[:1], raw.j[:1], raw.y[:1],
                              raw.jp[:1], raw.yp[:1], raw.log_scale[:1])
    count = top + 1
    nu_top = mu + top
    xi = 1.0 / x
    wronsk = 2.0 / (math.pi * x)

    f_top, sign = _cf1(nu_top, x)
    jr = np.empty(count)
    jpr = np.empty(count)
    jacc = np.empty(count)
    jl = sign
    jpl = f_top * jl
    acc = 0.0
    jr[top], jpr[top], jacc[top] = jl, jpl, acc
    for m in range(top, 0, -1):
        nu = mu + m
        jnew = nu * xi * jl + jpl
        jpl = (nu - 1.0) * xi * jnew - jl
        jl = jnew
        if abs(jl) > _BIG or abs(jpl) > _BIG:
            jl /= _BIG
            jpl /= _BIG
            acc += _LOG_BIG
        jr[m - 1], jpr[m - 1], jacc[m - 1] = jl, jpl, acc
    if jl == 0.0:
        jl = _TINY
    f_mu = jpl / jl

    if x < _TEMME_XMAX:
        ymu, y1 = _temme_y(mu, x)
        # J_{mu+1} Y_mu - J_mu Y_{mu+1} = 2/(pi x); Y_{mu+1} dominates for
        # either sign of mu, unlike Y'_mu - f Y_mu which cancels for mu < 0
        ratio = jr[1] / jr[0] * math.exp(jacc[1] - jacc[0]) if jr[0] != 0.0 else 0.0
        jmu = wronsk / (ratio * ymu - y1)
    else:
        pq = _steed_cf2(mu, x)
        p, q = pq.real, pq.imag
        gam = (p - f_mu) / q
        jmu = math.sqrt(wronsk / (q * (1.0 + gam * gam)))
        jmu = math.copysign(jmu, jl)
        ymu = gam * jmu
        ypmu = q * jmu + p * ymu
        y1 = mu * xi * ymu - ypmu

    yr = np.empty(count)
    ypr = np.empty(count)
    yacc = np.empty(count)
    ycur, ynext = ymu, y1
    acc = 0.0
    for m in range(count):
        nu = mu + m
        yr[m] = ycur
        ypr[m] = nu * xi * ycur - ynext
        yacc[m] = acc
        if m < top:
            ynew = 2.0 * (nu + 1.0) * xi * ynext - ycur
            ycur, ynext = ynext, ynew
            if abs(ynext) > _BIG:
                ycur /= _BIG
                ynext /= _BIG
                acc += _LOG_BIG

    norm = jmu / jl
    log_norm = math.log(abs(norm)) - jacc[0]
    orders = mu + np.arange(count, dtype=float)
    j = np.empty(count)
    jp = np.empty(count)
    y = np.empty(count)
    yp = np.empty(count)
    s = np.zeros(count)
    for m in range(count):
        lj = math.log(abs(jr[m])) + jacc[m] + log_norm if jr[m] != 0.0 else -math.inf
        ly = math.log(abs(yr[m])) + yacc[m] if yr[m] != 0.0 else -math.inf
        if lj >= -_LOG_SAFE and ly <= _LOG_SAFE:
            sm = 0.0
        else:
            sm = 0.5 * (lj - ly) if math.isfinite(lj) and math.isfinite(ly) else 0.0
        s[m] = sm
        jshift = jacc[m] - jacc[0] - sm
        if jshift == 0.0:
            j[m] = norm * jr[m]
            jp[m] = norm * jpr[m]
        else:
            j[m] = _times_exp(norm * math.copysign(1.0, jr[m]), math.log(abs(jr[m])) + jshift) \
                if jr[m] != 0.0 else 0.0
            jp[m] = _times_exp(norm * math.copysign(1.0, jpr[m]), math.log(abs(jpr[m])) + jshift) \
                if jpr[m] != 0.0 else 0.0
        yshift = yacc[m] + sm
        y[m] = _times_exp(yr[m], yshift)
        yp[m] = _times_exp(ypr[m], yshift)
    return CylinderLadder(float(x), orders, j, y, jp, yp, s)


def cylinder_ladder(nu0: float, count: int, x: float) -> CylinderLadder:
    """Cylinder functions at the orders ``nu0, nu0 + 1, ..., nu0 + count - 1``.

    One continued-fraction evaluation serves the whole ladder, which makes
    this the efficient entry point for partial-wave sums.
    """
    _check_argument(x)
    if count < 1:
        raise InputError("count must be at least 1")
    _check_order(nu0)
    _check_order(nu0 + count - 1)
    shift = int(round(nu0))
    mu = nu0 - shift
    raw = _ladder_core(mu, shift + count - 1, x)
    if shift == 0:
        return raw
    sl = slice(shift, None)
    return CylinderLadder(raw.argument, raw.orders[sl], raw.j[sl], raw.y[sl],
                          raw.jp[sl], raw.yp[sl], raw.log_scale[sl])


def cylinder(nu: float, x: float) -> CylinderValue:
    """J, Y and derivatives at a single point, in scaled form."""
    _check_order(nu)
    _check_argument(x)
    return cylinder_ladder(nu, 1, x)[0]


def bessel_j(nu: float, x: float) -> tuple[float, float]:
    """Bessel function of the first kind and its derivative.

    Values below the smallest double flush to zero; use :func:`cylinder`
    for the scaled form.
    """
    cv = cylinder(nu, x)
    return cv.J, cv.Jp


def bessel_y(nu: float, x: float) -> tuple[float, float]:
    """Bessel function of the second kind and its derivative.

    Raises
    ------
    RangeError
        If Y overflows a double (small x, large order).
    """
    cv = cylinder(nu, x)
    y, yp = cv.Y, cv.Yp
    if not (math.isfinite(y) and math.isfinite(yp)):
        raise RangeError(f"Y_{nu}({x}) overflows; use cylinder() for the scaled value")
    return y, yp


def hankel1(nu: float, x: float) -> tuple[complex, complex]:
    """Hankel function of the first kind H = J + iY and its derivative."""
    cv = cylinder(nu, x)
    y, yp = cv.Y, cv.Yp
    if not (math.isfinite(y) and math.isfinite(yp)):
        raise RangeError(f"H_{nu}({x}) overflows; use cylinder() for the scaled value")
    h = complex(cv.J, y)
    if abs(h) < np.finfo(float).tiny:
        raise InternalError(f"|H_{nu}({x})| vanished")
    return h, complex(cv.Jp, yp)
