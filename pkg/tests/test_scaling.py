import math

import numpy as np
import pytest

import popuc as pp
from popuc.scaling import _largest_zero_sturm

from conftest import random_cd_q


class TestConstantThreshold:
    def test_chebyshev_case(self):
        d = pp.ChainSeq.from_values([0.25] * 9)  # N = 10
        thr = pp.constant_scaling_threshold(d)
        assert thr == pytest.approx(math.cos(math.pi / 11) ** 2, abs=1e-10)

    def test_two_term_case(self):
        d = pp.ChainSeq.from_values([0.17])
        assert pp.constant_scaling_threshold(d) == pytest.approx(0.17, abs=1e-12)

    def test_sharpness_ultraspherical(self):
        N = 10
        d = pp.ChainSeq.from_values(pp.ChainSeq.ultraspherical(1.0).values[:N - 1])
        thr = pp.constant_scaling_threshold(d)
        assert pp.make_scaling(d, np.full(N - 1, thr * (1 + 1e-6))) is not None
        with pytest.raises(pp.ScalingError):
            pp.make_scaling(d, np.full(N - 1, thr * (1 - 1e-6)))

    def test_sharpness_random(self, rng):
        for _ in range(8):
            n = int(rng.integers(3, 21))
            cd, _ = random_cd_q(rng, n)
            d = cd.d
            thr = pp.constant_scaling_threshold(d)
            assert pp.make_scaling(d, np.full(n - 1, min(thr * (1 + 1e-6), 1.0)))
            with pytest.raises(pp.ScalingError):
                pp.make_scaling(d, np.full(n - 1, thr * (1 - 1e-6)))

    def test_verdict_boundary_band(self):
        d = pp.ChainSeq.from_values([0.25] * 9)
        thr = pp.constant_scaling_threshold(d)
        assert pp.constant_scaling_verdict(d, thr) == "boundary"
        assert pp.constant_scaling_verdict(d, thr * (1 + 1e-6)) == "valid"
        assert pp.constant_scaling_verdict(d, thr * (1 - 1e-6)) == "invalid"
        assert pp.constant_scaling_verdict(d, 1.2) == "invalid"

    def test_sturm_route_matches_ladder(self, rng):
        for _ in range(10):
            n = int(rng.integers(3, 40))
            cd, _ = random_cd_q(rng, n)
            sym = pp.CdParams.from_sequences(np.zeros(n), cd.d.values)
            ladder_top = pp.zeros_W(sym, n).x[0]
            sturm_top = _largest_zero_sturm(cd.d.values, 1e-12)
            assert abs(ladder_top - sturm_top) < 1e-9


class TestInfiniteThreshold:
    def test_chebyshev_limit(self):
        d = pp.ChainSeq.constant(0.25, horizon=8)
        thr = pp.constant_scaling_threshold_infinite(d, tol=1e-4)
        assert thr == pytest.approx(1.0, abs=0.02)
        assert thr < 1.0  # approached from below

    def test_scaled_chebyshev_limit(self):
        d = pp.ChainSeq.constant(3 / 16, horizon=8)
        thr = pp.constant_scaling_threshold_infinite(d, tol=1e-5)
        assert thr == pytest.approx(0.75, abs=0.01)

    def test_gegenbauer_limit(self):
        d = pp.ChainSeq.ultraspherical(1.0, horizon=8)
        thr = pp.constant_scaling_threshold_infinite(d, tol=1e-5)
        assert thr > 0.99

    def test_nonconvergence_guard(self):
        d = pp.ChainSeq.constant(0.25, horizon=8)
        with pytest.raises(pp.NonConvergenceError):
            pp.constant_scaling_threshold_infinite(d, tol=1e-12)

    def test_requires_rule(self):
        with pytest.raises(pp.InputError):
            pp.constant_scaling_threshold_infinite(
                pp.ChainSeq.from_values([0.2] * 4), tol=1e-3)


class TestLegendreDominant:
    def test_first_element(self):
        dhat = pp.legendre_dominant(10)
        assert dhat.values[0] == pytest.approx(
            (1 / 3) / math.cos(math.pi / 20) ** 2, rel=1e-14)

    def test_dominates_negative_lambda(self):
        N = 10
        d = pp.ChainSeq.from_values(pp.ChainSeq.ultraspherical(-0.25).values[:N - 1])
        assert pp.comparison_test(d, pp.legendre_dominant(N))
        assert pp.make_scaling(d, d.values / pp.legendre_dominant(N).values)

    @pytest.mark.parametrize("lam", [-0.25, 0.3, 1.0])
    def test_domination_chain(self, lam):
        N = 40
        d_lam = pp.ChainSeq.ultraspherical(lam).values[:N - 1]
        d_leg = pp.ChainSeq.ultraspherical(-0.5).values[:N - 1]
        dhat = pp.legendre_dominant(N).values
        assert np.all(d_lam < d_leg)
        assert np.all(d_leg < dhat)

    def test_largest_legendre_zero_bound(self):
        # the largest zero of every degree stays below cos(pi / (2 n))
        sym = pp.CdParams.from_sequences(
            np.zeros(100), pp.ChainSeq.ultraspherical(-0.5, horizon=99))
        ladder = pp.zeros_ladder(sym, 100)
        for n, zeros in enumerate(ladder, start=1):
            if n >= 2:
                assert zeros[-1] < math.cos(math.pi / (2 * n))


class TestDefaultScaling:
    def test_geronimus_constant(self):
        alpha = 0.3 + 0.4j
        aseq = pp.VerblunskySeq.geronimus(alpha, horizon=12)
        q = pp.default_scaling_for(aseq, 12)
        g = (1 - abs(alpha) ** 2) / (2 * (1 + alpha.real))
        expect = 4 * (1 - g) * g
        np.testing.assert_allclose(q.values, expect, rtol=1e-13)

    def test_lambda_eta_positive(self):
        N = 10
        aseq = pp.VerblunskySeq.lambda_eta(1.0, 1.0, horizon=N)
        q = pp.default_scaling_for(aseq, N)
        # quotient by the extremal constant: q_2 = 4 d_2 cos^2(pi / 11)
        expect_q2 = 4 * pp.ultraspherical_chain(1.0, 1) * math.cos(math.pi / 11) ** 2
        assert q.values[0] == pytest.approx(expect_q2, rel=1e-12)
        assert np.all(q.values <= 1.0)

    def test_lambda_eta_negative_uses_legendre(self):
        N = 10
        aseq = pp.VerblunskySeq.lambda_eta(-0.25, 1.0, horizon=N)
        q = pp.default_scaling_for(aseq, N)
        d = pp.cd_from_verblunsky(aseq, n_terms=N).d.values
        np.testing.assert_allclose(
            q.values, d / pp.legendre_dominant(N).values, rtol=1e-13)

    def test_alternating_equal(self):
        aseq = pp.VerblunskySeq.alternating(0.6, 0.6, 0.5, horizon=12)
        q = pp.default_scaling_for(aseq, 12)
        np.testing.assert_allclose(q.values, 1 - 0.36, rtol=1e-13)

    def test_alternating_unequal_in_region(self):
        aseq = pp.VerblunskySeq.alternating(0.6, 0.8, 0.5, horizon=12)
        q = pp.default_scaling_for(aseq, 12)
        d = pp.cd_from_verblunsky(aseq, n_terms=12).d.values
        np.testing.assert_allclose(q.values, 4 * d, rtol=1e-12)

    def test_alternating_unequal_outside_region(self):
        aseq = pp.VerblunskySeq.alternating(0.3, 0.6, 0.5, horizon=12)
        with pytest.raises(pp.InputError, match="supply q"):
            pp.default_scaling_for(aseq, 12)

    def test_inline_has_no_default(self):
        aseq = pp.VerblunskySeq.from_values(np.zeros(6))
        with pytest.raises(pp.InputError):
            pp.default_scaling_for(aseq, 6)
