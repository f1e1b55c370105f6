import math

import mpmath
import numpy as np
import pytest

from gmqaoa.evt import (
    DegenerateEstimateError,
    constant_angles,
    emin_estimate_closed_form,
    emin_estimate_quantile,
    gumbel_mean,
    gumbel_params,
    inv_norm_cdf,
)

mpmath.mp.dps = 40


def phi_hp(x):
    return mpmath.ncdf(x)


def bisect_quantile(p):
    """Independent oracle: bisection on a 40-digit normal CDF."""
    lo, hi = mpmath.mpf(-40), mpmath.mpf(40)
    p = mpmath.mpf(p)
    for _ in range(200):
        mid = (lo + hi) / 2
        if phi_hp(mid) < p:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


Q10 = bisect_quantile(2.0 ** -10)   # -3.0972690...
Q12 = bisect_quantile(2.0 ** -12)
Q14 = bisect_quantile(2.0 ** -14)   # -3.8419...


def test_oracle_values_sane():
    assert Q10 == pytest.approx(-3.097, abs=5e-4)
    assert Q14 == pytest.approx(-3.8419, abs=5e-4)


class TestInvNormCdf:
    def test_median(self):
        assert inv_norm_cdf(0.5) == 0.0

    # dyadic p keeps 1 - p exact
    @pytest.mark.parametrize("p", [2.0 ** -40, 2.0 ** -20, 2.0 ** -7, 0.25, 0.375])
    def test_symmetry(self, p):
        assert inv_norm_cdf(p) == pytest.approx(-inv_norm_cdf(1 - p), abs=1e-12)

    @pytest.mark.parametrize("p", [2.0 ** -10, 2.0 ** -14, 2.0 ** -24, 1e-15, 0.03, 0.7, 1 - 1e-15])
    def test_against_bisection(self, p):
        assert inv_norm_cdf(p) == pytest.approx(bisect_quantile(p), abs=1e-9)

    def test_round_trip_log_spaced(self):
        ps = np.concatenate([np.logspace(-15, math.log10(0.5), 5000),
                             1 - np.logspace(-15, math.log10(0.5), 5000)])
        worst = max(abs(float(phi_hp(inv_norm_cdf(p))) - p) for p in ps)
        assert worst < 1e-9

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            inv_norm_cdf(p)


class TestGumbel:
    def test_location(self):
        g = gumbel_params(0.0, 1.0, 2 ** 10)
        assert g.mu_g == pytest.approx(Q10, abs=1e-9)

    def test_linear_in_sigma(self):
        a = gumbel_params(0.0, 1.3, 4096)
        b = gumbel_params(0.0, 2.6, 4096)
        assert b.mu_g == pytest.approx(2 * a.mu_g, rel=1e-14)
        assert b.beta_g == pytest.approx(2 * a.beta_g, rel=1e-14)

    @pytest.mark.parametrize("N", [2, 3, 10, 2 ** 12, 2 ** 30])
    def test_positive_scale(self, N):
        assert gumbel_params(0.0, 1.0, N).beta_g > 0

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            gumbel_params(0.0, 0.0, 16)
        with pytest.raises(ValueError):
            gumbel_params(0.0, 1.0, 1)

    def test_monte_carlo_mean(self):
        rng = np.random.default_rng(2024)
        mins = rng.standard_normal((500, 4096)).min(axis=1)
        g = gumbel_params(0.0, 1.0, 4096)
        se = mins.std(ddof=1) / math.sqrt(mins.size)
        assert abs(mins.mean() - gumbel_mean(g)) < 3 * se


class TestEminEstimates:
    def test_quantile_n1_is_zero(self):
        assert emin_estimate_quantile(2.0, 1) == 0.0

    def test_quantile_values(self):
        assert emin_estimate_quantile(1.0, 10) == pytest.approx(Q10, abs=1e-9)
        assert emin_estimate_quantile(1.0, 14) == pytest.approx(Q14, abs=1e-9)

    def test_quantile_monotone_and_linear(self):
        vals = [emin_estimate_quantile(1.0, n) for n in range(1, 30)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert emin_estimate_quantile(3.0, 9) == pytest.approx(3 * emin_estimate_quantile(1.0, 9))

    def test_closed_form_n1(self):
        assert emin_estimate_closed_form(1.0, 1) == pytest.approx(-math.sqrt(2 * math.log(2)), rel=1e-15)
        assert emin_estimate_closed_form(1.0, 1) == pytest.approx(-1.17741, abs=1e-5)

    def test_closed_form_n10(self):
        # -sqrt(2 ln 2) sqrt(10) = -3.7233; 1 + ln(10)/(40 ln 2) = 1.08305
        assert emin_estimate_closed_form(1.0, 10) == pytest.approx(-3.7233 / 1.08305, abs=1e-3)

    def test_closed_form_asymptotics(self):
        def ratio(n):
            q = float(mpmath.sqrt(2) * mpmath.erfinv(2 * mpmath.mpf(2) ** -n - 1))
            return emin_estimate_closed_form(1.0, n) / q
        assert abs(ratio(64) - 1) < abs(ratio(8) - 1)


class TestConstantAngles:
    def test_arithmetic(self):
        s = constant_angles(-math.pi, 3)
        assert s.betas == (math.pi / 2,) * 3
        assert s.gammas == pytest.approx((1.0, 1.0, 1.0))

    def test_gamma_value(self):
        assert constant_angles(-3.097, 1).gammas[0] == pytest.approx(1.0144, abs=1e-4)

    def test_betas_fixed(self):
        for e in (-0.3, -7.0, 2.0):
            assert set(constant_angles(e, 4).betas) == {math.pi / 2}

    def test_degenerate(self):
        with pytest.raises(DegenerateEstimateError):
            constant_angles(0.0, 2)
        with pytest.raises(ValueError):
            constant_angles(-1.0, 0)
