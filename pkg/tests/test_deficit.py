import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from isodeficit import (
    Domain,
    Gaussian,
    IntervalSet,
    K,
    K_inverse,
    L,
    Laplace,
    Logistic,
    OutOfDomain,
    PostconditionFailed,
    asymmetry,
    classify_domain,
    deficit,
    gaussian_asymptotic_ratio,
    lambda_max,
    lower_bound_perimeter,
    mu_measure,
    optimal_set,
    perimeter,
    scan,
    snap_lambda,
)

from conftest import gauss_J, gauss_quantile
import regression_values as rv

INF = math.inf


@st.composite
def feasible(draw, half=False):
    """(x, y) with 0 < x <= 1/2 and 0 <= y <= lambda_max(x)."""
    x = draw(st.floats(1e-3, 0.5))
    frac = draw(st.floats(0.0, 1.0))
    return x, frac * lambda_max(x)


class TestK:
    def test_gaussian_regression(self, gauss):
        want = gauss_J(0.2) - gauss_J(0.25) + gauss_J(0.05)
        assert_allclose(K(gauss, 0.25, 0.1), want, rtol=1e-13)
        assert_allclose(K(gauss, 0.25, 0.1), rv.GAUSS_K_025_01, rtol=1e-12)

    def test_second_branch(self, gauss):
        assert_allclose(K(gauss, 0.3, 0.45), rv.GAUSS_K_03_045, rtol=1e-12)

    def test_laplace_vanishes_on_first_branch(self, laplace):
        assert K(laplace, 0.3, 0.2) == 0.0

    def test_vanishes_at_zero(self, builtin):
        _, m = builtin
        assert K(m, 0.3, 0.0) == 0.0
        assert K(m, 0.3, 1e-12) <= 1e-9

    def test_out_of_domain(self, gauss):
        with pytest.raises(OutOfDomain):
            K(gauss, 0.3, 0.9)
        with pytest.raises(OutOfDomain):
            K(gauss, 0.3, -0.1)

    def test_seam_belongs_to_first_branch(self, gauss):
        x = 0.2
        first = gauss_J(x / 2) - gauss_J(x) + gauss_J(x / 2)
        assert_allclose(K(gauss, x, x), first, rtol=1e-12)
        assert K(gauss, x, x + 1e-9) > K(gauss, x, x) + 0.01

    @settings(max_examples=200, deadline=None)
    @given(feasible())
    def test_nonnegative_and_dominates_L(self, xy):
        x, y = xy
        for m in (Gaussian(), Logistic(), Laplace()):
            k, l = K(m, x, y), L(m, x, y)
            assert k >= -1e-14
            assert l >= -1e-14
            assert l <= k + 1e-14

    @settings(max_examples=100, deadline=None)
    @given(x=st.floats(1e-3, 0.5), a=st.floats(0, 1), b=st.floats(0, 1))
    def test_nondecreasing_in_y(self, x, a, b):
        lo, hi = sorted((a, b))
        top = lambda_max(x)
        g = Gaussian()
        assert K(g, x, lo * top) <= K(g, x, hi * top) + 1e-14

    def test_x_above_half_is_reflected(self, gauss):
        assert K(gauss, 0.75, 0.2) == K(gauss, 0.25, 0.2)


class TestL:
    def test_laplace_vanishes(self, laplace):
        assert L(laplace, 0.3, 0.2) == pytest.approx(0.0, abs=1e-16)

    def test_gaussian_regression(self, gauss):
        want = gauss_J(0.05) - 0.2 * gauss_J(0.25)
        assert_allclose(L(gauss, 0.25, 0.1), want, rtol=1e-13)
        assert_allclose(L(gauss, 0.25, 0.1), rv.GAUSS_L_025_01, rtol=1e-12)

    def test_second_branch(self, gauss):
        assert_allclose(L(gauss, 0.3, 0.45), rv.GAUSS_L_03_045, rtol=1e-12)


class TestKInverse:
    def test_large_deficit(self, builtin):
        _, m = builtin
        assert K_inverse(m, 0.3, 10.0) == lambda_max(0.3)

    def test_laplace_flat_branch(self, laplace):
        assert K_inverse(laplace, 0.3, 0.0) == 0.3

    def test_round_trip(self, gauss):
        y = K_inverse(gauss, 0.25, rv.GAUSS_K_025_01)
        assert y == pytest.approx(0.1, abs=1e-12)

    def test_negative_deficit(self, gauss):
        with pytest.raises(ValueError):
            K_inverse(gauss, 0.25, -1.0)

    def test_continuity_gaussian(self, gauss):
        seq = [K_inverse(gauss, 0.25, 2.0 ** -k) for k in range(1, 31)]
        assert all(b <= a for a, b in zip(seq, seq[1:]))
        assert seq[-1] < 0.01

    @settings(max_examples=60, deadline=None)
    @given(feasible())
    def test_is_supremum(self, xy):
        x, y = xy
        g = Gaussian()
        d = K(g, x, y)
        y_star = K_inverse(g, x, d)
        assert y_star >= y - 1e-12
        if y_star < lambda_max(x) - 1e-9:
            assert K(g, x, min(y_star + 1e-8, lambda_max(x))) > d


class TestDomains:
    @pytest.mark.parametrize("mu, lam, dom", [
        (0.3, 0.1, Domain.D2),
        (0.3, 0.5, Domain.D1),
        (0.7, 0.5, Domain.D4),
        (0.7, 0.2, Domain.D3),
        (0.5, 0.5, Domain.D2),
        (0.3, 0.3, Domain.D2),
    ])
    def test_classify(self, mu, lam, dom):
        assert classify_domain(mu, lam).id is dom

    def test_infeasible(self):
        with pytest.raises(OutOfDomain):
            classify_domain(0.3, 0.9)


class TestLowerBound:
    def test_isoperimetric_inequality(self, builtin):
        _, m = builtin
        assert lower_bound_perimeter(m, 0.3, 0.0) == m.profile(0.3)

    def test_laplace_zero_deficit(self, laplace):
        assert_allclose(lower_bound_perimeter(laplace, 0.4, 0.2), 0.4, rtol=1e-15)
        assert_allclose(lower_bound_perimeter(laplace, 0.4, 0.2), laplace.profile(0.4),
                        rtol=1e-15)

    def test_gaussian_d1(self, gauss):
        assert_allclose(lower_bound_perimeter(gauss, 0.3, 0.4), gauss_J(0.5) + gauss_J(0.2),
                        rtol=1e-13)

    def test_gaussian_d2(self, gauss):
        assert_allclose(lower_bound_perimeter(gauss, 0.3, 0.2), rv.GAUSS_BOUND_03_02,
                        rtol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(feasible())
    def test_bound_equals_J_plus_K(self, xy):
        x, y = xy
        g = Gaussian()
        assert lower_bound_perimeter(g, x, y) == pytest.approx(g.profile(x) + K(g, x, y),
                                                               abs=1e-14)


class TestOptimalSet:
    def test_d2(self, gauss):
        s = optimal_set(gauss, 0.3, 0.2)
        assert s.intervals[0][0] == -INF and s.intervals[1][1] == INF
        assert_allclose(s.intervals[0][1], rv.GAUSS_Q_02, rtol=1e-13)
        assert_allclose(s.intervals[1][0], rv.GAUSS_Q_09, rtol=1e-13)
        assert_allclose(perimeter(s, gauss), gauss_J(0.2) + gauss_J(0.9), rtol=1e-13)

    def test_d1(self, gauss):
        s = optimal_set(gauss, 0.3, 0.5)
        assert_allclose(s.intervals, [(gauss_quantile(0.25), gauss_quantile(0.55))], rtol=1e-13)

    def test_d3(self, gauss):
        s = optimal_set(gauss, 0.7, 0.2)
        assert_allclose(s.intervals, [(gauss_quantile(0.2), gauss_quantile(0.9))], rtol=1e-13)

    def test_d4(self, gauss):
        s = optimal_set(gauss, 0.7, 0.5)
        assert len(s) == 2
        assert_allclose(mu_measure(s, gauss), 0.7, rtol=1e-13)
        assert_allclose(asymmetry(s, gauss).lambda_, 0.5, rtol=1e-12)

    def test_zero_lambda_rejected(self, gauss):
        with pytest.raises(OutOfDomain):
            optimal_set(gauss, 0.3, 0.0)

    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(0.01, 0.99), frac=st.floats(0.01, 1.0))
    def test_attains_bound(self, mu, frac):
        lam = frac * lambda_max(min(mu, 1 - mu))
        for m in (Gaussian(), Logistic(), Laplace()):
            s = optimal_set(m, mu, lam)
            assert perimeter(s, m) == pytest.approx(lower_bound_perimeter(m, mu, lam), abs=1e-9)


class TestDeficit:
    def test_half_line(self, gauss):
        rep = deficit(IntervalSet(((-INF, 0.0),)), gauss)
        assert rep.delta == pytest.approx(0.0, abs=1e-15)
        assert rep.lambda_ == pytest.approx(0.0, abs=1e-15)
        assert rep.k_bound == pytest.approx(0.0, abs=1e-15)

    def test_gaussian_unit_interval(self, gauss):
        rep = deficit(IntervalSet(((-1.0, 1.0),)), gauss)
        assert_allclose(rep.mu, rv.GAUSS_MU_M1_1, rtol=1e-13)
        assert_allclose(rep.m, 1 - rv.GAUSS_MU_M1_1, rtol=1e-13)
        assert_allclose(rep.perimeter, rv.GAUSS_P_M1_1, rtol=1e-13)
        assert_allclose(rep.j_at_mu, rv.GAUSS_J_MU_M1_1, rtol=1e-12)
        assert_allclose(rep.delta, rv.GAUSS_DELTA_M1_1, rtol=1e-12)
        # the set is the D3 minimizer, so the deficit equals K
        assert rep.domain is Domain.D3
        assert_allclose(rep.k_bound, rep.delta, rtol=1e-12)

    def test_laplace_two_tails(self, laplace):
        rep = deficit(IntervalSet(((-INF, -1.0), (2.0, INF))), laplace)
        assert rep.delta >= 0
        assert rep.lambda_ <= rep.m
        assert rep.l_bound == pytest.approx(0.0, abs=1e-15)
        assert rep.k_bound == pytest.approx(0.0, abs=1e-15)

    def test_seam_snap(self):
        assert snap_lambda(0.3, 0.3 + 1e-14) == 0.3
        assert snap_lambda(0.3, 0.31) == 0.31
        assert snap_lambda(0.3, 0.7) == lambda_max(0.3)


class TestGaussianAsymptotic:
    def test_ratios(self):
        ys = sorted(rv.GAUSS_RATIOS, reverse=True)
        got = [gaussian_asymptotic_ratio(y) for y in ys]
        # K(1/4, y) loses ~1e-16/y relative accuracy to cancellation
        assert_allclose(got, [rv.GAUSS_RATIOS[y] for y in ys], rtol=1e-7)
        assert 0.5 < got[0] < 1.5
        assert abs(got[3] - 1) < abs(got[0] - 1)
        assert 0.8 < got[-1] < 1.25
        assert all(abs(b - 1) < abs(a - 1) for a, b in zip(got, got[1:]))


class TestScan:
    def test_full_grid(self, gauss):
        rows, skipped = scan(gauss, n=20)
        assert len(rows) == 400 and skipped == 0
        err = max(abs(r.bound - r.optimal_perimeter) for r in rows)
        assert err <= 1e-9
        assert {r.domain for r in rows} == set(Domain)

    def test_skips_infeasible(self, gauss):
        rows, skipped = scan(gauss, mus=[0.3, 0.6], lambdas=[0.2, 0.9])
        assert len(rows) == 2 and skipped == 2

    def test_laplace_d2_rows_have_zero_K(self, laplace):
        rows, _ = scan(laplace, n=20)
        d2 = [r.K for r in rows if r.domain is Domain.D2]
        assert d2 and np.max(np.abs(d2)) <= 1e-12
