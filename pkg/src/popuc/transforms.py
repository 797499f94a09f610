"""Maps between Verblunsky coefficients and the (c_n, d_n) parametrization.

A measure on the unit circle is determined by its Verblunsky coefficients
alpha_0, alpha_1, ... in the open unit disk.  An equivalent description is a
real sequence {c_n} together with a positive chain sequence {d_{n+1}}; the
pair parametrizes the whole family of measures that differ from each other
only by the amount of mass t placed at z = 1.  The bridge between the two is
the unimodular sequence {tau_n},

    tau_0 = 1,    tau_n = (tau_{n-1} - conj(alpha_{n-1})) / (1 - tau_{n-1} alpha_{n-1}),

through which

    c_n = -Im(tau_{n-1} alpha_{n-1}) / (1 - Re(tau_{n-1} alpha_{n-1})),
    g_n = |1 - tau_{n-1} alpha_{n-1}|^2 / (2 (1 - Re(tau_{n-1} alpha_{n-1}))),
    d_{n+1} = (1 - g_n) g_{n+1}.

A rotated variant tau^(theta) (tau_0 = e^{i theta}) produces the
parametrization of the measure rotated so that an arbitrary point of the
circle plays the role of z = 1.

The reverse direction recovers the coefficients of the family member with
mass t at z = 1 from the chain sequence augmented by d_1 = (1 - t) M_1,
where M_1 is the maximal parameter head of {d_{n+1}}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .chainseq import (ChainSeq, ParamSeq, chain_failure_index, maximal_params,
                       SP_THRESHOLD)
from .errors import InputError, InvariantError, NotChainSequenceError

TWO_PI = 2.0 * math.pi

# |1 - tau * alpha| below this means the input is corrupted: analytically the
# product stays at distance >= 1 - |alpha| > 0 from 1.
_DIVISION_GUARD = 1e-15


def _validate_alpha(values: np.ndarray) -> np.ndarray:
    mod = np.abs(values)
    if len(values) and mod.max() >= 1.0:
        bad = int(np.argmax(mod >= 1.0))
        raise InputError(
            f"Verblunsky coefficient alpha_{bad} has modulus {mod[bad]:.17g} >= 1")
    return values


@dataclass(frozen=True)
class VerblunskySeq:
    """Verblunsky coefficients, either an inline prefix or a named family.

    ``family`` is one of ``inline``, ``geronimus``, ``alternating``,
    ``lambda-eta``; named families generate exact coefficients at any index,
    ``horizon`` is only the default length.  ``params`` keeps the family's
    scalar parameters for consumers such as the per-family default scalings.

    Named families also carry their closed-form tau sequence.  The tau
    recursion, as a circle map, multiplies phase errors by
    (1 - |alpha|^2) / |1 - tau alpha|^2 per step, which exceeds 1 exactly
    along the special orbits these families live on, so iterating it there
    loses the structure at an exponential rate; the closed forms keep the
    parametrization exact.
    """

    family: str
    horizon: int
    params: dict = field(default_factory=dict)
    _prefix_fn: Callable[[int], np.ndarray] = field(default=None, repr=False)
    _tau_fn: Optional[Callable[[int], np.ndarray]] = field(default=None, repr=False)

    @classmethod
    def from_values(cls, values) -> "VerblunskySeq":
        arr = np.asarray(values, dtype=complex)
        _validate_alpha(arr)
        arr.setflags(write=False)
        return cls("inline", len(arr), {}, lambda n: arr[:n])

    @classmethod
    def geronimus(cls, alpha: complex, horizon: int = 64) -> "VerblunskySeq":
        """alpha_n = w^{n+1} alpha with w = (1 + conj(alpha)) / (1 + alpha).

        The rotation w places the distinguished point of the constant-alpha
        measure at z = 1; for real alpha the sequence is constant.  The tau
        sequence is w^{-n}.
        """
        alpha = complex(alpha)
        if abs(alpha) >= 1.0:
            raise InputError(f"|alpha| must be < 1, got {abs(alpha):.17g}")
        phase = cmath.phase((1.0 + alpha.conjugate()) / (1.0 + alpha))

        def prefix(n: int) -> np.ndarray:
            k = np.arange(1, n + 1)
            return np.exp(1j * phase * k) * alpha

        def tau(n: int) -> np.ndarray:
            return np.exp(-1j * phase * np.arange(n + 1))

        return cls("geronimus", horizon, {"alpha": alpha}, prefix, tau)

    @classmethod
    def alternating(cls, b1: float, b2: float, c: float,
                    horizon: int = 64) -> "VerblunskySeq":
        """alpha_{2n} = (b1 + ic)/(1 + ic), alpha_{2n+1} = (b2 - ic)/(1 + ic).

        The tau sequence is 2-periodic: 1, (1 + ic)/(1 - ic), 1, ...
        """
        if not (-1.0 < b1 < 1.0 and -1.0 < b2 < 1.0):
            raise InputError("alternating family needs -1 < b1, b2 < 1")
        even = (b1 + 1j * c) / (1 + 1j * c)
        odd = (b2 - 1j * c) / (1 + 1j * c)
        tau_odd = (1 + 1j * c) / (1 - 1j * c)

        def prefix(n: int) -> np.ndarray:
            out = np.empty(n, dtype=complex)
            out[0::2] = even
            out[1::2] = odd
            return out

        def tau(n: int) -> np.ndarray:
            out = np.ones(n + 1, dtype=complex)
            out[1::2] = tau_odd
            return out

        return cls("alternating", horizon, {"b1": b1, "b2": b2, "c": c}, prefix, tau)

    @classmethod
    def lambda_eta(cls, lam: float, eta: float, horizon: int = 64) -> "VerblunskySeq":
        """alpha_{n-1} = -(b)_n / (conj(b) + 1)_n with b = lam + i eta, lam > -1/2.

        The tau sequence is the product of the exactly unimodular ratios
        (k + lam - i eta) / (k + lam + i eta), k = 1..n.
        """
        if lam <= -0.5:
            raise InputError(f"lambda must be > -1/2, got {lam}")
        b = complex(lam, eta)

        def prefix(n: int) -> np.ndarray:
            k = np.arange(n)
            ratios = (b + k) / (b.conjugate() + 1 + k)
            return -np.cumprod(ratios)

        def tau(n: int) -> np.ndarray:
            k = np.arange(1, n + 1)
            ratios = (k + lam - 1j * eta) / (k + lam + 1j * eta)
            out = np.empty(n + 1, dtype=complex)
            out[0] = 1.0
            out[1:] = np.cumprod(ratios)
            out[1:] /= np.abs(out[1:])
            return out

        return cls("lambda-eta", horizon, {"lam": lam, "eta": eta}, prefix, tau)

    def prefix(self, count: Optional[int] = None) -> np.ndarray:
        """First ``count`` coefficients (default: the stated horizon)."""
        if count is None:
            count = self.horizon
        if self.family == "inline" and count > self.horizon:
            raise InputError(
                f"inline coefficient list has {self.horizon} terms, {count} requested")
        return _validate_alpha(np.asarray(self._prefix_fn(count), dtype=complex))

    def __len__(self) -> int:
        return self.horizon


@dataclass(frozen=True)
class TauSeq:
    """Unimodular sequence tau_0 .. tau_m, renormalized at every step.

    ``max_drift`` records the largest deviation of |tau| from 1 seen before
    renormalization; it stays at rounding level unless the input is corrupt.
    """

    values: np.ndarray
    rotation: Optional[float] = None
    max_drift: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def _normalize_rotation(theta: float) -> float:
    """Fold a rotation angle into (0, 2*pi]."""
    folded = math.fmod(theta, TWO_PI)
    if folded <= 0.0:
        folded += TWO_PI
    return folded


def tau_from_verblunsky(alpha: VerblunskySeq, n: Optional[int] = None,
                        rotation: Optional[float] = None) -> TauSeq:
    """Sequence tau_0 .. tau_n driven by the first n Verblunsky coefficients.

    Without rotation this is the Moebius recursion with tau_0 = 1; with a
    rotation angle theta it starts at e^{i theta} and applies the phase
    factor every step.  Each value is renormalized to unit modulus.  Named
    families with a closed-form tau bypass the recursion (see
    :class:`VerblunskySeq`).
    """
    if n is None:
        n = alpha.horizon
    if rotation is None and alpha._tau_fn is not None:
        return TauSeq(np.asarray(alpha._tau_fn(n), dtype=complex))
    a = alpha.prefix(n)
    out = np.empty(n + 1, dtype=complex)
    drift = 0.0
    if rotation is None:
        tau = 1.0 + 0.0j
        phase = None
    else:
        theta = _normalize_rotation(rotation)
        phase = cmath.exp(1j * theta)
        tau = phase
    out[0] = tau
    for k in range(n):
        prod = tau * a[k]
        denom = 1.0 - prod
        if abs(denom) < _DIVISION_GUARD:
            raise InvariantError(
                f"tau recursion denominator vanished at step {k + 1}; "
                "coefficients corrupted")
        if phase is None:
            tau = (tau - a[k].conjugate()) / denom
        else:
            tau = phase * tau * (1.0 - prod.conjugate()) / denom
        mod = abs(tau)
        drift = max(drift, abs(mod - 1.0))
        tau /= mod
        out[k + 1] = tau
    return TauSeq(out, rotation=None if rotation is None else _normalize_rotation(rotation),
                  max_drift=drift)


@dataclass(frozen=True)
class CdParams:
    """(c_n, d_{n+1}) parametrization together with its g_n and tau_n.

    ``c.values[k]`` is c_{k+1}, ``g`` holds the parameter sequence of the
    generating measure (the member with mass t = 1 - g_1/M_1 at z = 1), and
    ``d`` factors as d_{n+1} = (1 - g_n) g_{n+1}.
    """

    c: np.ndarray
    d: ChainSeq
    g: ParamSeq
    tau: TauSeq

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        if len(self.g) != len(c):
            raise InputError("parameter sequence length must match c")
        if len(self.d.values) != max(len(c) - 1, 0):
            raise InputError("chain sequence must have one term fewer than c")
        g = self.g.values
        if len(g) > 1:
            recon = (1.0 - g[:-1]) * g[1:]
            scale = np.maximum(np.abs(self.d.values), 1e-300)
            if np.max(np.abs(recon - self.d.values) / scale) > 1e-13:
                raise InputError("d and g are inconsistent: d != (1 - g_n) g_{n+1}")

    @property
    def n(self) -> int:
        return len(self.c)

    @classmethod
    def from_sequences(cls, c, d, tol: float = 1e-12) -> "CdParams":
        """Build from raw (c, d); the g attached is the maximal parameter
        sequence, i.e. the family member carrying no mass at z = 1."""
        c = np.asarray(c, dtype=float)
        if isinstance(d, ChainSeq):
            dseq = d
        else:
            dseq = ChainSeq.from_values(d)
        if len(dseq.values) != len(c) - 1:
            raise InputError(
                f"need len(d) = len(c) - 1, got {len(dseq.values)} and {len(c)}")
        bad = chain_failure_index(dseq)
        if bad is not None:
            raise NotChainSequenceError(
                bad, f"d is not a positive chain sequence at n={bad}")
        if len(dseq.values) == 0:
            # a single coefficient carries no chain constraint and the
            # supremum head 1 is not attained; use the symmetric member
            g = ParamSeq(np.array([0.5]), "generic")
        else:
            m = maximal_params(dseq, tol=tol)
            g = ParamSeq(m.values[:len(c)], "maximal")
        tau = _tau_from_c(c)
        return cls(c, dseq, g, tau)


def _tau_from_c(c: np.ndarray) -> TauSeq:
    """tau_0 = 1, tau_n = tau_{n-1} (1 - i c_n) / (1 + i c_n)."""
    out = np.empty(len(c) + 1, dtype=complex)
    tau = 1.0 + 0.0j
    out[0] = tau
    drift = 0.0
    for k, ck in enumerate(c):
        tau = tau * (1.0 - 1j * ck) / (1.0 + 1j * ck)
        mod = abs(tau)
        drift = max(drift, abs(mod - 1.0))
        tau /= mod
        out[k + 1] = tau
    return TauSeq(out, max_drift=drift)


def cd_from_verblunsky(alpha: VerblunskySeq, n_terms: Optional[int] = None,
                       rotation: Optional[float] = None) -> CdParams:
    """(c, d, g, tau) of the measure described by ``alpha``.

    ``n_terms`` coefficients c_1 .. c_N are produced (defaulting to the
    sequence horizon), along with g_1 .. g_N and the N - 1 chain-sequence
    elements d_2 .. d_N.
    """
    if n_terms is None:
        n_terms = alpha.horizon
    if n_terms < 1:
        raise InputError(f"need at least one coefficient, got n_terms={n_terms}")
    a = alpha.prefix(n_terms)
    tau = tau_from_verblunsky(alpha, n_terms, rotation)
    prod = tau.values[:-1] * a
    re = prod.real
    im = prod.imag
    denom = 1.0 - re
    c = -im / denom
    g = 0.5 * ((1.0 - re) ** 2 + im ** 2) / denom
    d = (1.0 - g[:-1]) * g[1:]
    return CdParams(c, ChainSeq.from_values(d), ParamSeq(g, "generic"), tau)


def rotated_cd(alpha: VerblunskySeq, theta2: float,
               n_terms: Optional[int] = None) -> CdParams:
    """Parametrization after rotating the measure so that the circle point at
    angle ``theta2`` is carried to z = 1.

    Equivalent to replacing alpha_n by e^{i (n+1) theta2} alpha_n; angles are
    folded modulo 2*pi into (0, 2*pi].
    """
    if theta2 <= 0.0:
        raise InputError(f"rotation angle must be positive, got {theta2}")
    return cd_from_verblunsky(alpha, n_terms, rotation=theta2)


def verblunsky_from_cd(cd: CdParams, t: float = 0.0,
                       tol: float = 1e-12) -> VerblunskySeq:
    """Coefficients of the family member with mass ``t`` at z = 1.

    Forms the augmented sequence d_1 = (1 - t) M_1, d_2, ... and runs its
    minimal-parameter recursion; member coefficients follow from

        alpha_{n-1} = (1 - 2 m_n - i c_n) / ((1 - i c_n) tau_{n-1}).

    ``t = 0`` selects the member with no mass at z = 1 (the maximal head).

    Parameter orbits are determined by their head, but reconstructing one
    forward from the head alone amplifies rounding exponentially whenever the
    orbit is non-minimal.  When the requested head coincides with the head of
    the parameter sequence stored on ``cd`` (as it does for the mass value
    returned by :func:`mass_at_one`), the stored orbit is that same member
    and is used directly, which keeps roundtrips at rounding accuracy.
    """
    if not (0.0 <= t < 1.0):
        raise InputError(f"t must lie in [0, 1), got {t}")
    m1_max = maximal_params(cd.d, tol=tol).values[0]
    if t > 0.0 and m1_max <= SP_THRESHOLD:
        raise InputError("no mass-variant family: chain sequence is "
                         "single-parameter (maximal head is 0)")
    n = cd.n
    d = cd.d.values
    tau = _tau_from_c(cd.c).values
    alpha = np.empty(n, dtype=complex)
    head = (1.0 - t) * m1_max
    stored = cd.g.values
    orbit: Optional[np.ndarray]
    if abs(head - stored[0]) <= 4.0 * np.finfo(float).eps * max(stored[0], 1e-300):
        orbit = stored
    else:
        orbit = None
    m = stored[0] if orbit is not None else head
    for k in range(n):
        if not (0.0 < m < 1.0) and not (k == 0 and m == 0.0):
            if k == n - 1 and m >= 1.0:
                # the finite-truncation member with no mass at z = 1 is a
                # terminating measure: its last coefficient is unimodular and
                # falls outside the open-disk contract
                raise InputError(
                    "member terminates: the final augmented parameter reached 1 "
                    "(finite truncation at t = 0); request t > 0 or provide a "
                    "rule-backed chain sequence")
            raise InvariantError(
                f"augmented parameter recursion left (0, 1) at step {k + 1}")
        ck = cd.c[k]
        alpha[k] = (1.0 - 2.0 * m - 1j * ck) / ((1.0 - 1j * ck) * tau[k])
        if k < n - 1:
            m = orbit[k + 1] if orbit is not None else d[k] / (1.0 - m)
    return VerblunskySeq.from_values(alpha)


def mass_at_one(cd: CdParams, tol: float = 1e-12) -> float:
    """Mass t at z = 1 of the measure whose parameter sequence is ``cd.g``.

    Computed as t = 1 - g_1 / M_1 and clipped into [0, 1); feeding the result
    back into :func:`verblunsky_from_cd` reproduces the generating
    coefficients.
    """
    m1 = maximal_params(cd.d, tol=tol).values[0]
    if m1 <= 0.0:
        return 0.0
    return min(max(1.0 - cd.g.values[0] / m1, 0.0), math.nextafter(1.0, 0.0))


def has_point_mass_at_one(cd: CdParams, tol: float = 1e-8) -> bool:
    """True when the generating measure carries an atom at z = 1.

    Equivalent to its parameter head sitting strictly below the maximal one;
    for a constant parameter sequence g this is the classical criterion
    g < 1/2.
    """
    m1 = maximal_params(cd.d).values[0]
    return m1 - cd.g.values[0] > tol
