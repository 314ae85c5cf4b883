import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xyent.entropy import (
    LN2,
    EntropyValue,
    LambdaSequence,
    Method,
    asymptotic_near_h2_above,
    asymptotic_near_h2_below,
    asymptotic_near_XX,
    closed_form_from_modulus,
    entropy_closed_form,
    entropy_from_kappa,
    entropy_series,
    lambda_zero,
    series_tail_bound,
    series_terms,
)
from xyent.errors import CriticalPointError, DomainError, NearCriticalError
from xyent.iso_curves import kappa_of_point
from xyent.phase_diagram import CRITICAL_REGIONS, ModelPoint, Region, classify, elliptic_parameter
from xyent.special_functions import EllipticData

# lambda-series summed at 40 digits with mpmath, |m| <= 200
REFERENCE = {
    (0.0, 0.5): 0.7807794513364838066296856545834907282791,
    (1.0, 1.0): 0.6989875284221795730452501166275421085831,
    (3.0, 0.5): 0.1235141732605494629171408743640969871895,
    (0.0, 0.6): 0.7458880337358793265340579239032967522521,
    (1.0, 0.2): 0.9782481968296411028866799739974943248783,
}
TANH_HALF_PI = 0.9171523356672743463730929214426187753679


def P(h, g):
    return ModelPoint(h, g)


def point_with_k(region, k, t=0.5):
    """A point in `region` with modulus `k`; `t` in (0, 1) slides along the curve."""
    kp = math.sqrt(1 - k * k)
    if region is Region.CASE2:
        kappa = k / kp
        h = 2 + 4 * t
        return P(h, kappa * math.sqrt((h / 2) ** 2 - 1))
    kappa = 1 / kp if region is Region.CASE1A else kp
    h = 2 * t
    return P(h, kappa * math.sqrt(1 - (h / 2) ** 2))


class TestLambda:
    def test_zero(self):
        assert lambda_zero(0, 0.7, 1) == 0.0

    @given(st.integers(-50, 50), st.floats(0.01, 10))
    def test_odd(self, m, tau0):
        assert lambda_zero(-m, tau0, 1) == -lambda_zero(m, tau0, 1)
        assert lambda_zero(-m - 1, tau0, 0) == -lambda_zero(m, tau0, 0)

    def test_half_shift(self):
        assert lambda_zero(0, 1.0, 0) == pytest.approx(TANH_HALF_PI, rel=1e-16)

    def test_sequence(self):
        seq = LambdaSequence(1, 0.05)
        vals = seq.values(30)
        assert np.all(np.abs(vals) < 1)
        assert np.all(np.diff(vals) > 0)
        assert seq[30] > 1 - 1e-3

    def test_rejects_bad_sigma(self):
        with pytest.raises(DomainError):
            LambdaSequence(2, 1.0)


class TestSeries:
    @pytest.mark.parametrize("hg", sorted(REFERENCE))
    def test_reference(self, hg):
        v = entropy_series(P(*hg))
        assert v.method is Method.SERIES
        assert v.err_estimate < 1e-12
        assert abs(v.value - REFERENCE[hg]) <= v.err_estimate + 1e-15

    @pytest.mark.parametrize("hg", sorted(REFERENCE))
    def test_reference_tight(self, hg):
        v = entropy_series(P(*hg), tol=1e-16)
        assert v.value == pytest.approx(REFERENCE[hg], rel=4e-15)

    def test_case1_limit(self):
        assert entropy_series(P(1.6, 0.6)).value == LN2
        assert entropy_series(P(0, 1 + 1e-7)).value == pytest.approx(LN2, abs=1e-12)

    def test_case2_limit(self):
        assert entropy_series(P(3, 0)).value == 0.0
        p = P(1e3, 1e-3)
        assert entropy_series(p).value == pytest.approx(entropy_closed_form(p).value, abs=1e-12)
        assert entropy_series(p).value < 1e-10

    def test_critical_refused(self):
        with pytest.raises(CriticalPointError):
            entropy_series(P(2, 0.5))

    def test_near_critical_refused(self):
        with pytest.raises(NearCriticalError):
            entropy_series(P(2 + 1e-14, 1))

    def test_terms_positive_and_partial_sums_increase(self):
        e = elliptic_parameter(P(0.3, 0.4))
        lam = LambdaSequence(1, e.tau0).values(40)
        t = series_terms(lam)
        assert np.all(t >= 0)
        assert np.all(np.diff(np.cumsum(t)) >= 0)

    def test_terms_stable_at_large_argument(self):
        # series_terms takes the tanh argument x, lambda = tanh x
        x = np.array([-800.0, -20.0, 0.0, 20.0, 800.0])
        t = series_terms(x)
        assert np.all(np.isfinite(t))
        assert t[0] == 0.0 and t[-1] == 0.0
        assert t[2] == pytest.approx(LN2, rel=1e-16)
        # 1 + tanh(-20) = 2 e^-40 / (1 + e^-40), no cancellation
        assert t[1] == pytest.approx(2 * math.exp(-40) * (40 + math.log1p(math.exp(-40))), rel=1e-14)

    @given(st.floats(-30, 30))
    def test_terms_match_direct(self, x):
        lam = math.tanh(x)
        if 1 + lam < 1e-6:
            return
        direct = (1 + lam) * math.log(2 / (1 + lam))
        assert float(series_terms(x)) == pytest.approx(direct, rel=1e-9, abs=1e-15)

    @given(st.integers(0, 200), st.floats(0.05, 5), st.sampled_from([0, 1]))
    def test_tail_bound_dominates(self, M, tau0, sigma):
        s = (1 - sigma) / 2
        x = (np.arange(M + 1, M + 2000) + s) * math.pi * tau0
        dropped = math.fsum(series_terms(x)) + math.fsum(series_terms(-x))
        assert dropped <= series_tail_bound(M, tau0, sigma) * (1 + 1e-12)


class TestClosedForm:
    @pytest.mark.parametrize("hg", sorted(REFERENCE))
    def test_reference(self, hg):
        v = entropy_closed_form(P(*hg))
        assert v.method is Method.CLOSED_FORM
        assert v.value == pytest.approx(REFERENCE[hg], rel=1e-13)

    def test_boundary(self):
        assert entropy_closed_form(P(1.6, 0.6)).value == LN2

    def test_isotropic_free(self):
        assert entropy_closed_form(P(3, 0)).value == 0.0

    @pytest.mark.parametrize("hg", [(2, 0.3), (1, 0), (0, 0)])
    def test_divergent(self, hg):
        v = entropy_closed_form(P(*hg))
        assert v.divergent and not v.is_finite
        assert float(v) == math.inf

    def test_undefined(self):
        v = entropy_closed_form(P(2, 0))
        assert v.undefined and not v.divergent
        assert math.isnan(float(v))

    @given(st.floats(0, 6), st.floats(0, 3))
    def test_nonnegative_and_symmetric(self, h, g):
        v = entropy_closed_form(P(h, g))
        if v.is_finite:
            assert v.value >= 0
        for q in (P(-h, g), P(h, -g)):
            w = entropy_closed_form(q)
            assert (w.value, w.divergent, w.undefined) == (v.value, v.divergent, v.undefined) or (
                math.isnan(w.value) and math.isnan(v.value)
            )

    @pytest.mark.parametrize("branch", [Region.CASE2, Region.CASE1A, Region.CASE1B])
    def test_limits_toward_k_zero(self, branch):
        target = 0.0 if branch is Region.CASE2 else LN2
        diffs = [
            abs(closed_form_from_modulus(10.0**-j, branch) - target) for j in range(2, 7)
        ]
        # Case 1 reaches the rounding floor of ln 2 by k = 1e-4, hence non-strict
        assert all(b <= a for a, b in zip(diffs, diffs[1:]))
        assert diffs[-1] < 1e-3

    @pytest.mark.parametrize("branch", [Region.CASE2, Region.CASE1A, Region.CASE1B])
    def test_increasing_toward_criticality(self, branch):
        ks = np.linspace(0.9, 0.999, 100)
        vals = [closed_form_from_modulus(k, branch) for k in ks]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_bits(self):
        v = entropy_closed_form(P(1.6, 0.6)).in_bits()
        assert v.value == pytest.approx(1.0, rel=1e-15)


class TestRouteAgreement:
    @pytest.mark.parametrize("region", [Region.CASE2, Region.CASE1A, Region.CASE1B])
    def test_grid(self, region):
        for k in np.linspace(0.05, 0.95, 12):
            for t in (0.1, 0.5, 0.9):
                p = point_with_k(region, k, t)
                assert classify(p) is region
                closed = entropy_closed_form(p).value
                assert entropy_series(p).value == pytest.approx(closed, abs=1e-9)
                kv = entropy_from_kappa(kappa_of_point(p), region).value
                assert kv == pytest.approx(closed, abs=1e-9)

    @given(st.floats(0, 6), st.floats(0.01, 3))
    def test_series_matches_closed(self, h, g):
        p = P(h, g)
        if classify(p) in CRITICAL_REGIONS or elliptic_parameter(p).k > 0.999:
            return
        assert entropy_series(p).value == pytest.approx(entropy_closed_form(p).value, abs=1e-10)


class TestKappa:
    def test_boundary(self):
        assert entropy_from_kappa(1.0, "Boundary").value == LN2

    @pytest.mark.parametrize("branch,kappa", [(Region.CASE1A, 1 + 1e-9), (Region.CASE1B, 1 - 1e-9)])
    def test_circle_limit(self, branch, kappa):
        assert entropy_from_kappa(kappa, branch).value == pytest.approx(LN2, abs=1e-6)

    def test_case2_limit(self):
        assert entropy_from_kappa(0.0, Region.CASE2).value == 0.0
        assert entropy_from_kappa(1e-4, Region.CASE2).value < 1e-6

    def test_matches_closed_form(self):
        v = entropy_from_kappa(0.6, Region.CASE1B)
        assert v.method is Method.KAPPA
        assert v.value == pytest.approx(REFERENCE[(0.0, 0.6)], rel=1e-13)

    @given(st.floats(1.001, 1000))
    def test_duality(self, kappa):
        a = entropy_from_kappa(kappa, Region.CASE1A).value
        b = entropy_from_kappa(1 / kappa, Region.CASE1B).value
        assert a == pytest.approx(b, rel=1e-12)

    @pytest.mark.parametrize(
        "kappa,branch", [(0.5, Region.CASE1A), (2, Region.CASE1B), (-1, Region.CASE2), (0.9, "Boundary")]
    )
    def test_mismatch(self, kappa, branch):
        with pytest.raises(DomainError):
            entropy_from_kappa(kappa, branch)

    def test_branch_names(self):
        assert entropy_from_kappa(2.0, "Case1a") == entropy_from_kappa(2.0, Region.CASE1A)


class TestAsymptotic:
    def test_xx_reduces_at_h0(self):
        g = 1e-3
        assert asymptotic_near_XX(P(0, g)).value == pytest.approx(-math.log(g / 2) / 3, rel=1e-15)

    def test_h2_below_second_term(self):
        h = 1.5
        v = asymptotic_near_h2_below(P(h, 2)).value
        assert v == pytest.approx(-math.log(1 - (h / 2) ** 2) / 6, rel=1e-15)

    def test_h2_above_second_term(self):
        h = 2.5
        v = asymptotic_near_h2_above(P(h, 0.25)).value
        assert v == pytest.approx(-math.log((h / 2) ** 2 - 1) / 6, rel=1e-15)

    def test_method(self):
        assert asymptotic_near_XX(P(1, 0.01)).method is Method.ASYMPTOTIC

    @pytest.mark.parametrize(
        "fn,hg",
        [
            (asymptotic_near_XX, (2, 0.1)),
            (asymptotic_near_XX, (3, 0.1)),
            (asymptotic_near_h2_below, (2, 1)),
            (asymptotic_near_h2_above, (2, 1)),
            (asymptotic_near_h2_above, (1, 1)),
        ],
    )
    def test_domain(self, fn, hg):
        with pytest.raises(DomainError):
            fn(P(*hg))

    def test_h2_above_converges(self):
        diffs = [
            abs(
                entropy_closed_form(P(2 + 10.0**-j, 1)).value
                - asymptotic_near_h2_above(P(2 + 10.0**-j, 1)).value
            )
            for j in range(3, 8)
        ]
        assert all(b < a for a, b in zip(diffs, diffs[1:]))
        assert diffs[-1] < 0.01

    def test_xx_offset(self):
        # the expansion lies a constant ln(2)/3 below the closed form as gamma -> 0
        d = entropy_closed_form(P(1, 1e-6)).value - asymptotic_near_XX(P(1, 1e-6)).value
        assert d == pytest.approx(LN2 / 3, abs=1e-6)

    def test_h2_below_offset(self):
        # the expansion lies a constant ln 2 below the closed form as h -> 2-
        h = 2 - 1e-8
        d = entropy_closed_form(P(h, 1)).value - asymptotic_near_h2_below(P(h, 1)).value
        assert d == pytest.approx(LN2, abs=1e-6)


class TestEntropyValue:
    def test_marker(self):
        assert EntropyValue.marker(Region.CRITICAL_XX, Method.SERIES).divergent
        assert EntropyValue.marker(Region.ESSENTIAL_CRITICAL_POINT, Method.SERIES).undefined

    def test_elliptic_inputs(self):
        e = EllipticData.from_modulus(0.5)
        assert closed_form_from_modulus(e.k, Region.CASE2, e.k_prime) == pytest.approx(
            entropy_closed_form(P(4, 1)).value, rel=1e-15
        )
