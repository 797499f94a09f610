"""Three-term recurrences on the circle and their interval transplants.

The circle-side polynomials R_n follow

    R_{n+1}(z) = [(1 + i c_{n+1}) z + (1 - i c_{n+1})] R_n(z) - 4 d_{n+1} z R_{n-1}(z)

with R_{-1} = 0, R_0 = 1; all their zeros are simple, sit on the unit circle
and interlace between consecutive degrees.  Substituting z = e^{i theta} and
x = cos(theta / 2) transplants them to real functions W_n on [-1, 1],

    W_{n+1}(x) = (x - c_{n+1} sqrt(1 - x^2)) W_n(x) - d_{n+1} W_{n-1}(x),

with W_n(x) = 2^{-n} e^{-i n theta / 2} R_n(e^{i theta}).  Zeros of W_N are
located by walking degrees upward: the zeros of W_{n-1} together with the
endpoints bracket exactly one zero of W_n each, and bisection on the sign of
W_n (whose recurrence evaluates with exact sign under scaling) pins them
down with guaranteed enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import InputError, InvariantError
from .transforms import CdParams

TWO_PI = 2.0 * math.pi

# Rescale the running recurrence pair every this many steps to keep the
# magnitudes representable; growth per step is bounded by ~(1 + |c| + 1).
_RESCALE_EVERY = 32


class ScaledValue(NamedTuple):
    """A real number stored as mantissa * 2**exp2 to dodge overflow."""

    mantissa: float
    exp2: int

    @property
    def value(self) -> float:
        return math.ldexp(self.mantissa, self.exp2)

    @property
    def sign(self) -> int:
        return int(self.mantissa > 0) - int(self.mantissa < 0)

    @property
    def log2_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log2(abs(self.mantissa)) + self.exp2


def _coeffs(cd: CdParams, n: int):
    if n < 0:
        raise InputError(f"degree must be >= 0, got {n}")
    if cd.n < n:
        raise InputError(f"need {n} coefficients c_1..c_{n}, have {cd.n}")
    return cd.c, cd.d.values


def eval_R(cd: CdParams, n: int, z: complex) -> complex:
    """R_n(z) by the forward recurrence.

    Plain complex arithmetic; magnitudes grow like 2^n on the circle, so for
    degrees beyond a few hundred prefer :func:`eval_W`, which carries an
    explicit exponent.
    """
    c, d = _coeffs(cd, n)
    r_prev = 0.0 + 0.0j
    r = 1.0 + 0.0j
    for k in range(n):
        coef = (1.0 + 1j * c[k]) * z + (1.0 - 1j * c[k])
        if k == 0:
            r, r_prev = coef * r, r
        else:
            r, r_prev = coef * r - 4.0 * d[k - 1] * z * r_prev, r
    return r


def eval_W(cd: CdParams, n: int, x: float) -> ScaledValue:
    """W_n(x) as (mantissa, base-2 exponent).

    The returned sign is exact barring mantissa underflow, which the
    periodic rescaling rules out.
    """
    c, d = _coeffs(cd, n)
    if not -1.0 <= x <= 1.0:
        raise InputError(f"x must lie in [-1, 1], got {x}")
    s = math.sqrt(max(0.0, 1.0 - x * x))
    w_prev = 0.0
    w = 1.0
    exp2 = 0
    for k in range(n):
        w, w_prev = (x - c[k] * s) * w - (d[k - 1] * w_prev if k else 0.0), w
        if (k + 1) % _RESCALE_EVERY == 0:
            m = max(abs(w), abs(w_prev))
            if m > 0.0:
                e = math.frexp(m)[1]
                w = math.ldexp(w, -e)
                w_prev = math.ldexp(w_prev, -e)
                exp2 += e
    return ScaledValue(w, exp2)


def _eval_W_grid(c: np.ndarray, d: np.ndarray, n: int, xs: np.ndarray,
                 track_peak: bool = False):
    """Vectorized W_n over ``xs``; returns (mantissa, exp2) arrays.

    With ``track_peak`` a third array gives log2 of the largest magnitude the
    recurrence passed through at each point, which bounds the evaluation's
    rounding-noise floor.
    """
    xs = np.asarray(xs, dtype=float)
    s = np.sqrt(np.maximum(0.0, 1.0 - xs * xs))
    w_prev = np.zeros_like(xs)
    w = np.ones_like(xs)
    exp2 = np.zeros(len(xs), dtype=np.int64)
    peak = np.zeros_like(xs) if track_peak else None
    for k in range(n):
        w, w_prev = (xs - c[k] * s) * w - (d[k - 1] * w_prev if k else 0.0), w
        if track_peak:
            mag = np.abs(w)
            big = mag > 0.0
            np.maximum(peak, np.where(big, np.log2(np.where(big, mag, 1.0)) + exp2,
                                      -np.inf), out=peak)
        if (k + 1) % _RESCALE_EVERY == 0:
            m = np.maximum(np.abs(w), np.abs(w_prev))
            nonzero = m > 0.0
            e = np.where(nonzero, np.frexp(m)[1], 0).astype(np.int64)
            scale = np.ldexp(1.0, -e)
            w = w * scale
            w_prev = w_prev * scale
            exp2 += e
    if track_peak:
        return w, exp2, peak
    return w, exp2


def _w_sign_fn(c: np.ndarray, d: np.ndarray, n: int):
    def signs(xs: np.ndarray) -> np.ndarray:
        return np.sign(_eval_W_grid(c, d, n, xs)[0])

    return signs


@dataclass(frozen=True)
class ZeroList:
    """Zeros of a degree-n member: x descending in (-1, 1), theta ascending.

    ``theta[j] = 2 arccos(x[j])`` maps the interval zeros back to the circle;
    the descending x ordering makes theta increase.
    """

    n: int
    x: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        theta = np.asarray(self.theta, dtype=float)
        x.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "theta", theta)
        if len(x) != self.n or len(theta) != self.n:
            raise InputError("zero count must equal the degree")
        if self.n:
            if not (np.diff(x) < 0).all():
                raise InvariantError("zeros in x must be strictly decreasing")
            if x[0] >= 1.0 or x[-1] <= -1.0:
                raise InvariantError("zeros must be interior to (-1, 1)")

    @classmethod
    def from_ascending_x(cls, n: int, asc: np.ndarray) -> "ZeroList":
        x = np.ascontiguousarray(asc[::-1])
        theta = 2.0 * np.arccos(np.clip(x, -1.0, 1.0))
        return cls(n, x, theta)


def _bisect_brackets(sign_fn, lo, hi, sign_lo, iters: int):
    """Vector bisection; keeps the sign change inside [lo, hi] throughout."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        sm = sign_fn(mid)
        hit = sm == 0.0
        go_lo = (sm == sign_lo) & ~hit
        lo = np.where(hit, mid, np.where(go_lo, mid, lo))
        hi = np.where(hit, mid, np.where(go_lo, hi, mid))
    return 0.5 * (lo + hi)


def zeros_ladder(cd: CdParams, N: int, xtol: float = 1e-12):
    """Zeros (ascending in x) of every member W_1 .. W_N.

    Level n brackets come from level n - 1 augmented by the endpoints; the
    sign pattern of W_n at those points is checked against the interlacing
    prediction and any mismatch aborts, since it can only mean corrupted
    coefficients.
    """
    if N < 1:
        raise InputError(f"degree must be >= 1, got {N}")
    if xtol <= 0:
        raise InputError("xtol must be positive")
    c, d = _coeffs(cd, N)
    # Always drive the brackets to machine precision: zeros of consecutive
    # degrees can sit closer together than any coarse xtol near support
    # endpoints, and the next level's sign predictions need the sharp values.
    iters = max(int(math.ceil(math.log2(2.0 / xtol))) + 1, 56)
    ladder = []
    asc = np.array([c[0] / math.hypot(1.0, c[0])])
    ladder.append(asc)
    for level in range(2, N + 1):
        pts = np.concatenate(([-1.0], asc, [1.0]))
        sign_fn = _w_sign_fn(c, d, level)
        mant, exp2, peak = _eval_W_grid(c, d, level, pts, track_peak=True)
        with np.errstate(divide="ignore"):
            log2_val = np.where(mant == 0.0, -np.inf,
                                np.log2(np.abs(mant) + (mant == 0.0)) + exp2)
        # Values below the accumulated rounding noise have meaningless signs;
        # interlacing guarantees the theoretical pattern there, so take it.
        # (This happens when zeros of consecutive degrees nearly collide.)
        noise_floor = peak - 52.0 + math.log2(32.0 * level * level)
        reliable = log2_val > noise_floor
        got = np.sign(mant)
        k = np.arange(level + 1)
        expected = np.where((level - k) % 2 == 0, 1.0, -1.0)
        mismatch = reliable & (got != expected) & (got != 0.0)
        if mismatch.any():
            bad = int(np.argmax(mismatch))
            raise InvariantError(
                f"bracket sign pattern broken at degree {level}, point index {bad}: "
                "coefficients corrupted")
        asc = _bisect_brackets(sign_fn, pts[:-1], pts[1:], expected[:-1], iters)
        # Exact float ties can appear when zeros cluster below representable
        # separation; the true ordering is strict, so restore it within 1 ulp.
        for i in np.nonzero(np.diff(asc) <= 0.0)[0]:
            asc[i + 1] = np.nextafter(asc[i], 1.0)
        ladder.append(asc)
    return ladder


def zeros_W(cd: CdParams, N: int, xtol: float = 1e-12) -> ZeroList:
    """All N zeros of W_N, bracketed inductively and bisected to ``xtol``."""
    asc = zeros_ladder(cd, N, xtol)[-1]
    return ZeroList.from_ascending_x(N, asc)


def zeros_R(cd: CdParams, N: int, xtol: float = 1e-12,
            residual_check: bool = True) -> ZeroList:
    """Zeros of R_N as angles theta = 2 arccos(x) from the transplant.

    ``residual_check`` re-evaluates the transplant at each zero and at the
    midpoints of neighbouring gaps; a zero whose magnitude is not locally
    small signals corruption.
    """
    zl = zeros_W(cd, N, xtol)
    if residual_check and N >= 1:
        c, d = _coeffs(cd, N)
        asc = zl.x[::-1]
        refs = np.concatenate(([0.5 * (-1.0 + asc[0])],
                               0.5 * (asc[:-1] + asc[1:]),
                               [0.5 * (asc[-1] + 1.0)]))
        m_z, e_z, pk_z = _eval_W_grid(c, d, N, asc, track_peak=True)
        m_r, e_r = _eval_W_grid(c, d, N, refs)

        def log2_abs(m, e):
            with np.errstate(divide="ignore"):
                return np.where(m == 0.0, -np.inf, np.log2(np.abs(m) + (m == 0.0)) + e)

        lz = log2_abs(m_z, e_z)
        lr = log2_abs(m_r, e_r)
        local = np.maximum(lr[:-1], lr[1:])
        floor = pk_z - 52.0 + math.log2(32.0 * N * N)
        bad_mask = (lz > floor + 10.0) & (lz >= local - 10.0)
        if bad_mask.any():
            bad = int(np.argmax(bad_mask))
            raise InvariantError(
                f"residual at zero {bad + 1} of degree {N} is not locally small")
    return zl


def count_zeros_in_arc(zl: ZeroList, arc) -> int:
    """Number of zero angles inside a circular arc.

    ``arc`` provides ``theta1``, ``theta2`` and ``closed`` (an Arc or any
    duck-typed object / tuple).  theta2 may exceed 2*pi to wrap through the
    point z = 1; a zero-width arc counts nothing.
    """
    if isinstance(arc, tuple):
        theta1, theta2 = arc[0], arc[1]
        closed = arc[2] if len(arc) > 2 else True
    else:
        theta1, theta2 = arc.theta1, arc.theta2
        closed = getattr(arc, "closed", True)
    width = theta2 - theta1
    if width < 0:
        raise InputError("arc must have theta2 >= theta1")
    if width == 0:
        return 0
    if width >= TWO_PI:
        return zl.n
    start = theta1 % TWO_PI
    rel = (zl.theta - start) % TWO_PI
    if closed:
        inside = rel <= width
        # points exactly at the start angle have rel == 0 and are included
    else:
        inside = (rel > 0) & (rel < width)
    return int(np.count_nonzero(inside))
