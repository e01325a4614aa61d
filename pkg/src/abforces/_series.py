"""Channel bookkeeping for partial-wave sums over n with order |n + shift|."""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InternalError, TruncationError
from .specfun import NU_MAX, cylinder_ladder

TAIL_RTOL = 1e-12


@dataclass(frozen=True)
class SeriesTruncation:
    """How a partial-wave series was cut off.

    ``n_max`` counts channels per side (orders up to about ``n_max`` + 1);
    ``tail_bound`` is the magnitude of the first omitted pair of terms
    relative to the retained series.
    """

    n_max: int
    tail_bound: float

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


def n_max_rule(kr: float) -> int:
    """Channels per side needed to resolve J at argument ``kr``."""
    return int(math.ceil(kr + 10.0 * kr ** (1.0 / 3.0))) + 20


# per-side channel cap keeping every order inside the specfun range
MAX_CHANNELS = int(NU_MAX) - 2


@dataclass(frozen=True)
class Channels:
    """Channels m = 0..count-1 on each side of n = -shift, interleaved.

    Entry 2m is n = m - floor(shift) with order frac + m, entry 2m+1 is
    n = -floor(shift) - 1 - m with order 1 - frac + m.  The interleaving
    fixes the summation order (ascending order, symmetric pairs).
    """

    shift: float
    count: int

    @property
    def frac(self) -> float:
        return self.shift - math.floor(self.shift)

    @property
    def n(self) -> np.ndarray:
        m = np.arange(self.count)
        base = -int(math.floor(self.shift))
        out = np.empty(2 * self.count, dtype=np.int64)
        out[0::2] = base + m
        out[1::2] = base - 1 - m
        return out

    @property
    def nu(self) -> np.ndarray:
        m = np.arange(self.count, dtype=float)
        out = np.empty(2 * self.count)
        out[0::2] = self.frac + m
        out[1::2] = (1.0 - self.frac) + m
        return out

    def incident(self) -> np.ndarray:
        """(-i)**nu on the principal branch."""
        return np.exp(-0.5j * np.pi * self.nu)

    def angular(self, phi) -> np.ndarray:
        """exp(i n (phi + pi)) with channels along axis 0."""
        phi = np.asarray(phi, dtype=float)
        return np.exp(1j * np.multiply.outer(self.n, phi + np.pi))


@lru_cache(maxsize=2048)
def _table(frac: float, count: int, x: float):
    pos = cylinder_ladder(frac, count, x)
    neg = cylinder_ladder(1.0 - frac, count, x)
    arrays = []
    for name in ("j", "jp", "y", "yp", "log_scale"):
        out = np.empty(2 * count)
        out[0::2] = getattr(pos, name)
        out[1::2] = getattr(neg, name)
        out.setflags(write=False)
        arrays.append(out)
    return tuple(arrays)


def bessel_table(channels: Channels, x: float):
    """Scaled ``(j, jp, y, yp, s)`` arrays aligned with ``channels``."""
    return _table(float(channels.frac), int(channels.count), float(x))


def hankel_mantissa(j, jp, y, yp, s):
    """H = h exp(-s), H' = hp exp(-s)."""
    with np.errstate(under="ignore"):
        w = np.exp(2.0 * s)
    return j * w + 1j * y, jp * w + 1j * yp


def scaled_exp(exponent):
    """exp() that refuses to overflow; used for combined scale factors."""
    exponent = np.asarray(exponent, dtype=float)
    if np.any(exponent > 700.0):
        raise InternalError("scaled Bessel combination overflowed")
    with np.errstate(under="ignore"):
        return np.exp(exponent)


_recorders: list = []
_lock = threading.Lock()


@contextmanager
def record_truncations():
    """Collect every :class:`SeriesTruncation` accepted inside the block."""
    found: list = []
    with _lock:
        _recorders.append(found)
    try:
        yield found
    finally:
        with _lock:
            _recorders.remove(found)


def _report(trunc: SeriesTruncation) -> SeriesTruncation:
    with _lock:
        for found in _recorders:
            found.append(trunc)
    return trunc


def adaptive_truncation(build, n_start: int):
    """Grow the channel count until ``build`` reports an acceptable tail.

    ``build(count)`` evaluates ``count`` channels per side and returns
    ``(result, retained, tail)``, where ``tail`` is the magnitude of the last
    pair and ``retained`` the magnitude of the whole series.  The last pair
    stands in for the first omitted term.
    """
    cap = MAX_CHANNELS
    n = min(n_start, cap - 1)
    while True:
        result, retained, tail = build(n + 1)
        ratio = tail / retained if retained > 0 else (0.0 if tail == 0 else math.inf)
        if ratio <= TAIL_RTOL:
            return result, _report(SeriesTruncation(n, float(ratio)))
        if n >= cap - 1:
            raise TruncationError(
                f"partial-wave tail {ratio:.3g} above {TAIL_RTOL} with {n} channels per side")
        n = min(int(n * 1.5) + 1, cap - 1)
