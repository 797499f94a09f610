import math

import numpy as np
import pytest

from popuc import CdParams
from popuc.recurrence import _eval_W_grid


def random_alpha(rng, n, rmax=0.9):
    """n coefficients with modulus below rmax, uniform in modulus and phase."""
    mod = rng.uniform(0.0, rmax, n)
    phase = rng.uniform(0.0, 2.0 * np.pi, n)
    return mod * np.exp(1j * phase)


def random_cd_q(rng, n, trivial_prob=0.2):
    """Random (cd, q) pair with q a valid scaling by construction.

    Draws a dominant chain sequence dhat from interior parameters and sets
    d = q * dhat termwise, so d <= dhat is a chain sequence and d / q = dhat
    exactly.
    """
    h = rng.uniform(0.15, 0.85, n)
    dhat = (1.0 - h[:-1]) * h[1:]
    if rng.random() < trivial_prob:
        q = np.ones(n - 1)
    else:
        q = rng.uniform(0.3, 1.0, n - 1)
    d = q * dhat
    c = rng.uniform(-2.5, 2.5, n)
    return CdParams.from_sequences(c, d), q


def below_noise_floor(cd, degree, point):
    """True when the evaluated |W_degree(point)| is under its rounding noise.

    At such points the sign, and hence the exact zero ordering, is not
    decidable in double precision.
    """
    m, e, pk = _eval_W_grid(cd.c, cd.d.values, degree, np.array([point]),
                            track_peak=True)
    if m[0] == 0.0:
        return True
    level = math.log2(abs(m[0])) + e[0]
    return level <= pk[0] - 52.0 + math.log2(32.0 * degree * degree) + 6.0


def assert_interlacing(cd, ladder):
    """Zero ladders interlace strictly up to double-precision resolution.

    Consecutive-degree zeros must never cross; exact ties are permitted only
    where both degrees evaluate below their noise floors, i.e. where the true
    (strict) ordering is numerically undecidable.
    """
    for level, (lower, upper) in enumerate(zip(ladder, ladder[1:]), start=1):
        merged = np.empty(len(lower) + len(upper))
        merged[0::2] = upper
        merged[1::2] = lower
        diffs = np.diff(merged)
        assert np.all(diffs >= 0.0), f"zeros crossed between degrees {level}, {level + 1}"
        for idx in np.nonzero(diffs == 0.0)[0]:
            p = merged[idx]
            assert below_noise_floor(cd, level, p), \
                f"resolvable tie at degree {level}, x={p}"
            assert below_noise_floor(cd, level + 1, p), \
                f"resolvable tie at degree {level + 1}, x={p}"


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
