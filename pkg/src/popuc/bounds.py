"""Closed-form enclosures for extreme zeros, support arcs and gap certificates.

For a scaling sequence {q_{n+1}} of the chain sequence {d_{n+1}}, the pair
(c_n, c_{n+1}, q_{n+1}) feeds the quadratic

    (1 - q) u^2 - (a + b) u + (a b - q) = 0,

whose roots u^{(-)} <= u^{(+)} (with the convention u^{(+-)} = +-inf at
q = 1 when +-(a + b) >= 0) bound the zeros of the transplanted recurrence
members in the cotangent variable u = cot(theta / 2).  Mapping through
x = u / sqrt(1 + u^2) and taking extrema over n yields an open interval
(A_N, B_N) containing every zero of W_N, hence an open arc containing every
zero of R_N and, in the limit, the support of the mass-free family member.

Method tags follow the operation names: ``thm44`` is the pairwise quadratic
bound, ``thm46`` its single-coefficient weakening, ``cor45``/``cor47`` the
trivial-scaling specializations of each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .chainseq import ChainSeq, ScalingSeq, chain_failure_index, make_scaling
from .errors import BoundaryCaseError, InputError, ScalingError
from .recurrence import TWO_PI
from .transforms import CdParams, VerblunskySeq, rotated_cd


@dataclass(frozen=True)
class Arc:
    """Circular arc from theta1 to theta2 (radians), open or closed.

    theta1 may be negative and theta2 may exceed 2*pi on input; normalization
    shifts the start into [0, 2*pi) keeping the width in (0, 2*pi].
    """

    theta1: float
    theta2: float
    closed: bool = True

    def __post_init__(self):
        if not 0.0 < self.theta2 - self.theta1 <= TWO_PI:
            raise InputError(
                f"arc width must lie in (0, 2*pi], got {self.theta2 - self.theta1}")

    @classmethod
    def normalized(cls, theta1: float, theta2: float, closed: bool = True) -> "Arc":
        width = theta2 - theta1
        start = theta1 % TWO_PI
        return cls(start, start + width, closed)

    @property
    def width(self) -> float:
        return self.theta2 - self.theta1


@dataclass(frozen=True)
class RootPair:
    """Roots u^(-) <= u^(+) of the bounding quadratic; +-inf permitted."""

    u_minus: float
    u_plus: float

    def __post_init__(self):
        if not self.u_minus <= self.u_plus:
            raise InputError("roots out of order")


def quadratic_roots(a: float, b: float, q: float) -> RootPair:
    """Roots of (1 - q) u^2 - (a + b) u + (a b - q) for q in [0, 1].

    For q < 1 the discriminant is nonnegative and both roots are real; at
    q = 1 the leading coefficient vanishes and the unbounded root is reported
    as a signed infinity.
    """
    if not 0.0 <= q <= 1.0:
        raise InputError(f"q must lie in [0, 1], got {q}")
    s = a + b
    if q == 1.0:
        if s > 0.0:
            return RootPair((a * b - 1.0) / s, math.inf)
        if s < 0.0:
            return RootPair(-math.inf, (a * b - 1.0) / s)
        return RootPair(-math.inf, math.inf)
    lead = 1.0 - q
    prod = a * b - q
    disc = s * s - 4.0 * lead * prod
    disc = max(disc, 0.0)  # nonnegative analytically; clip rounding dust
    root = math.sqrt(disc)
    if s >= 0.0:
        big = (s + root) / (2.0 * lead)
    else:
        big = (s - root) / (2.0 * lead)
    if big == 0.0:  # s == 0 and a b == q: double root at the origin
        return RootPair(0.0, 0.0)
    other = prod / (lead * big)
    lo, hi = (other, big) if other <= big else (big, other)
    return RootPair(lo, hi)


def _x_from_u(u: float) -> float:
    """cot(theta/2) -> cos(theta/2), sending +-inf to +-1."""
    if math.isinf(u):
        return 1.0 if u > 0 else -1.0
    return u / math.hypot(1.0, u)


def _x_from_quarter(u: float) -> float:
    """cot(theta/4) = u  ->  cos(theta/2) = (u^2 - 1) / (u^2 + 1)."""
    if math.isinf(u):
        return 1.0
    return (u * u - 1.0) / (u * u + 1.0)


@dataclass(frozen=True)
class Enclosure:
    """Open interval (A, B) containing the zeros of W_N.

    ``argmin_index`` / ``argmax_index`` report the n attaining the extremum
    (smallest such n on ties), matching the bracketed annotations used when
    tabulating the bounds; one-sided methods leave the trivial side None.
    """

    A: float
    B: float
    argmin_index: Optional[int]
    argmax_index: Optional[int]
    method: str

    def __post_init__(self):
        if not (-1.0 <= self.A < self.B <= 1.0):
            raise InputError(f"invalid enclosure ({self.A}, {self.B})")

    @property
    def theta1(self) -> float:
        """Lower arc endpoint 2 arccos(B)."""
        return 2.0 * math.acos(self.B)

    @property
    def theta2(self) -> float:
        """Upper arc endpoint 2 arccos(A)."""
        return 2.0 * math.acos(self.A)


def _coerce_scaling(cd: CdParams, q, N: int, validate: bool) -> np.ndarray:
    """Scaling values q_2 .. q_N, validated against d_2 .. d_N."""
    if isinstance(q, ScalingSeq):
        vals = q.values
    else:
        vals = np.asarray(q, dtype=float)
    if len(vals) < N - 1:
        raise InputError(f"need {N - 1} scaling terms for degree {N}, have {len(vals)}")
    vals = vals[:N - 1]
    if validate:
        make_scaling(ChainSeq.from_values(cd.d.values[:N - 1]), vals)
    return vals


def _check_degree(cd: CdParams, N: int):
    if N < 2:
        raise InputError(f"bound computations need degree N >= 2, got {N}")
    if cd.n < N:
        raise InputError(f"need coefficients c_1..c_{N}, have {cd.n}")


def enclosure_thm44(cd: CdParams, q, N: int, validate: bool = True) -> Enclosure:
    """Pairwise quadratic enclosure from u^{(+-)}(c_{n-1}, c_n, q_n), n = 2..N."""
    _check_degree(cd, N)
    qv = _coerce_scaling(cd, q, N, validate)
    best_lo = math.inf
    best_hi = -math.inf
    arg_lo = arg_hi = None
    for m in range(2, N + 1):
        roots = quadratic_roots(cd.c[m - 2], cd.c[m - 1], qv[m - 2])
        x_lo = _x_from_u(roots.u_minus)
        x_hi = _x_from_u(roots.u_plus)
        if x_lo < best_lo:
            best_lo, arg_lo = x_lo, m
        if x_hi > best_hi:
            best_hi, arg_hi = x_hi, m
    return Enclosure(best_lo, best_hi, arg_lo, arg_hi, "thm44")


def _staggered_max(q: np.ndarray, N: int) -> np.ndarray:
    """q_n^{(1,N)}: q_2, max(q_n, q_{n+1}) for 2 <= n <= N-1, then q_N."""
    out = np.empty(N)
    out[0] = q[0]
    for n in range(2, N):
        out[n - 1] = max(q[n - 2], q[n - 1])
    out[N - 1] = q[N - 2]
    return out


def enclosure_thm46(cd: CdParams, q, N: int, validate: bool = True) -> Enclosure:
    """Single-coefficient enclosure using staggered maxima of the scaling."""
    _check_degree(cd, N)
    qv = _coerce_scaling(cd, q, N, validate)
    qs = _staggered_max(qv, N)
    best_lo = math.inf
    best_hi = -math.inf
    arg_lo = arg_hi = None
    for n in range(1, N + 1):
        cn = cd.c[n - 1]
        qn = qs[n - 1]
        root = math.sqrt(cn * cn + (1.0 - qn))
        sq = math.sqrt(qn)
        u1 = (cn + root) / (1.0 + sq)
        x_lo = _x_from_quarter(u1)
        den = -cn + root
        if den == 0.0:
            x_hi = 1.0
        else:
            x_hi = _x_from_quarter((1.0 + sq) / den)
        if x_lo < best_lo:
            best_lo, arg_lo = x_lo, n
        if x_hi > best_hi:
            best_hi, arg_hi = x_hi, n
    return Enclosure(best_lo, best_hi, arg_lo, arg_hi, "thm46")


def enclosure_cor45(cd: CdParams, N: int) -> Enclosure:
    """One-sided trivial-scaling enclosure; needs c_n + c_{n+1} of constant sign.

    With all sums positive the zeros stay in (A_N, 1); mirrored for negative.
    A sign change (or an exact zero sum) makes the statement trivial and the
    full interval (-1, 1) is returned.
    """
    _check_degree(cd, N)
    sums = cd.c[:N - 1] + cd.c[1:N]
    if (sums > 0.0).all():
        best_lo = math.inf
        arg_lo = None
        for m in range(2, N + 1):
            u = (cd.c[m - 2] * cd.c[m - 1] - 1.0) / (cd.c[m - 2] + cd.c[m - 1])
            x = _x_from_u(u)
            if x < best_lo:
                best_lo, arg_lo = x, m
        return Enclosure(best_lo, 1.0, arg_lo, None, "cor45")
    if (sums < 0.0).all():
        best_hi = -math.inf
        arg_hi = None
        for m in range(2, N + 1):
            u = (cd.c[m - 2] * cd.c[m - 1] - 1.0) / (cd.c[m - 2] + cd.c[m - 1])
            x = _x_from_u(u)
            if x > best_hi:
                best_hi, arg_hi = x, m
        return Enclosure(-1.0, best_hi, None, arg_hi, "cor45")
    return Enclosure(-1.0, 1.0, None, None, "cor45")


def enclosure_cor47(cd: CdParams, N: int) -> Enclosure:
    """Single-coefficient enclosure at the trivial scaling q = 1."""
    enc = enclosure_thm46(cd, np.ones(N - 1), N, validate=False)
    return Enclosure(enc.A, enc.B, enc.argmin_index, enc.argmax_index, "cor47")


_METHODS = {
    "thm44": enclosure_thm44,
    "thm46": enclosure_thm46,
    "cor45": lambda cd, q, N, validate=True: enclosure_cor45(cd, N),
    "cor47": lambda cd, q, N, validate=True: enclosure_cor47(cd, N),
}


@dataclass(frozen=True)
class SupportArc:
    """Finite-horizon support estimate A[theta1, theta2].

    The closed arc contains every zero up to the horizon degree and, when the
    per-degree extrema have stabilized, approximates the enclosing arc of the
    support of the mass-free family member.  ``stabilized_*`` compare the
    extrema at the horizon against the half horizon.
    """

    arc: Arc
    enclosure: Enclosure
    N: int
    stabilized_lower: bool
    stabilized_upper: bool

    @property
    def theta1(self) -> float:
        return self.arc.theta1

    @property
    def theta2(self) -> float:
        return self.arc.theta2


def support_arc(cd: CdParams, q, N_max: int, method: str = "thm44",
                stab_tol: float = 1e-8) -> SupportArc:
    """Tightest arc statement available at horizon ``N_max``.

    B_N increases and A_N decreases with N, so the horizon values give the
    largest finite-degree arc; the stabilization flags report whether another
    doubling of the horizon still moved them by more than ``stab_tol``.
    """
    if method not in _METHODS:
        raise InputError(f"unknown method {method!r}")
    fn = _METHODS[method]
    full = fn(cd, q, N_max)
    half_n = max(2, N_max // 2)
    half = fn(cd, q, half_n)
    arc = Arc(full.theta1, full.theta2, closed=True)
    return SupportArc(arc, full, N_max,
                      stabilized_lower=abs(full.A - half.A) < stab_tol,
                      stabilized_upper=abs(full.B - half.B) < stab_tol)


@dataclass(frozen=True)
class GapCertificate:
    """Outcome of the arc-emptiness test for supp(mu) against A(theta1, theta2).

    ``verified_to(N)`` means the head condition held and every ratio m_n up
    to the horizon stayed in (0, 1): the arc is gap-consistent as far as the
    horizon can see (and truly a gap when this persists for all n).
    ``violated(n)`` is conclusive: the arc meets the support.
    """

    verdict: str  # "verified" | "violated"
    horizon: int
    violated_at: Optional[int]
    c1_condition: bool
    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def verified(self) -> bool:
        return self.verdict == "verified"


def gap_certificate(alpha: VerblunskySeq, theta1: float, theta2: float,
                    N: int) -> GapCertificate:
    """Test whether the open arc (theta1, theta2) avoids the measure's support.

    Rotates the parametrization so the arc's upper endpoint plays z = 1, then
    drives the chain-sequence ratio recursion of the rotated coefficients at
    the probe point x* = cos((2*pi + theta1 - theta2) / 2).  The support
    avoids the arc iff cot((2*pi + theta1 - theta2)/2) < c_1 and every ratio
    stays in (0, 1); the first escape is a conclusive overlap witness.
    """
    if theta2 <= 0.0:
        raise InputError(f"theta2 must be positive, got {theta2}")
    width = theta2 - theta1
    if not 0.0 < width <= TWO_PI:
        raise InputError(f"arc width must lie in (0, 2*pi], got {width}")
    if N < 1:
        raise InputError(f"horizon must be >= 1, got {N}")
    cd = rotated_cd(alpha, theta2, n_terms=N + 1)
    half = 0.5 * (TWO_PI - width)
    x_star = math.cos(half)
    sin_half = math.sin(half)
    c1_ok = sin_half > 0.0 and (x_star / sin_half) < cd.c[0]
    if not c1_ok:
        return GapCertificate("violated", N, 0, False, np.empty(0))
    s = math.sqrt(max(0.0, 1.0 - x_star * x_star))
    t = x_star - cd.c * s  # t[k] = x* - c_{k+1} sqrt(1 - x*^2)
    tiny = np.abs(t) < 1e-13
    if tiny.any():
        raise BoundaryCaseError(int(np.argmax(tiny)) + 1,
                                "probe point lies on the cotangent direction of "
                                f"c_{int(np.argmax(tiny)) + 1}; arc endpoint sits on "
                                "the support boundary")
    d = cd.d.values
    m = np.empty(N)
    prev = 0.0
    for n in range(1, N + 1):
        val = d[n - 1] / (t[n - 1] * t[n] * (1.0 - prev))
        m[n - 1] = val
        if not 0.0 < val < 1.0:
            return GapCertificate("violated", N, n, True, m[:n])
        prev = val
    return GapCertificate("verified", N, None, True, m)


def two_interval_enclosure(cd: CdParams, A: float, B: float, C: float, D: float,
                           N: int) -> bool:
    """Alternating-coefficient test keeping zeros inside (A, C) u (D, B).

    Requires even N.  True when (A, B) passes the base enclosure conditions
    and, for one of the two parities, every even-indexed c_n sits in the low
    cotangent band and every odd-indexed one in the high band (or vice
    versa); all zeros of W_n, n <= N, then avoid [C, D].
    """
    if N < 2 or N % 2:
        raise InputError(f"N must be even and >= 2, got {N}")
    _check_degree(cd, N)
    if not (-1.0 < A < C < D < B < 1.0):
        raise InputError("need -1 < A < C < D < B < 1")

    def cot_of(x: float) -> float:
        return x / math.sqrt(1.0 - x * x)

    a_, b_, c_, d_ = cot_of(A), cot_of(B), cot_of(C), cot_of(D)
    cvals = cd.c[:N]
    if not (a_ < cvals[0] < b_):
        return False
    for x in (A, B):
        s = math.sqrt(1.0 - x * x)
        den = (x - cvals[:-1] * s) * (x - cvals[1:] * s)
        if (den <= 0.0).any():
            return False
        frak = cd.d.values[:N - 1] / den
        if (frak <= 0.0).any():
            return False
        if chain_failure_index(ChainSeq.from_values(frak)) is not None:
            return False
    if not c_ < d_:
        return False
    even = cvals[1::2]  # c_2, c_4, ...
    odd = cvals[0::2]   # c_1, c_3, ...
    for low, high in ((even, odd), (odd, even)):
        if ((low > a_) & (low < c_)).all() and ((high > d_) & (high < b_)).all():
            return True
    return False
