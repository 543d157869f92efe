import math

import pytest

from lmsvtail.gauss_lrd import LrdSpec
from lmsvtail.regimes import (
    RegimeReport,
    classify,
    covariance_exact,
    covariance_prediction,
    feasibility,
    iid_zone_exponent_bound,
)
from lmsvtail.tails import NoiseSpec, VolatilitySpec, limit_tail, quantile_u, survival_y


class TestClassify:
    def test_lrd_example(self):
        r = classify(10**4, 100, LrdSpec(0.9), 1)
        assert r.rho_n == pytest.approx(0.72 * 10**-0.8, rel=1e-12)
        assert r.product == pytest.approx(100 * 0.72 * 10**-0.8, rel=1e-12)
        assert r.product == pytest.approx(11.41, abs=0.01)
        assert r.zone == "lrd"
        assert r.w_n == pytest.approx(r.rho_n**-0.5)

    def test_short_memory_subordination(self):
        for k in (1, 50, 9999):
            r = classify(10**4, k, LrdSpec(0.55), 2)
            assert r.zone == "iid" and r.w_n == pytest.approx(math.sqrt(k))
            assert "Sigma_0" in r.sigma0_note

    def test_iid_example(self):
        r = classify(10**6, 10, LrdSpec(0.75), 1)
        assert not r.borderline_flag
        assert r.product == pytest.approx(3.75e-3, rel=1e-12)
        assert r.zone == "iid"

    def test_between_thresholds(self):
        r = classify(10**4, 10, LrdSpec(0.9), 1)
        assert r.zone == "borderline" and not r.borderline_flag

    def test_configurable_thresholds(self):
        r = classify(10**4, 10, LrdSpec(0.9), 1, threshold_high=1.0)
        assert r.zone == "lrd"

    def test_borderline_memory(self):
        with pytest.warns(RuntimeWarning):
            r = classify(1000, 10, LrdSpec(0.75), 2)
        assert r.borderline_flag and r.zone == "borderline"

    def test_independent(self):
        r = classify(1000, 10, LrdSpec(0.5, "iid"), 1)
        assert r.zone == "iid" and r.product == 0.0

    @pytest.mark.parametrize("n,k,q", [(100, 0, 1), (100, 100, 1), (100, 5, 0)])
    def test_validation(self, n, k, q):
        with pytest.raises(ValueError):
            classify(n, k, LrdSpec(0.8), q)

    def test_serialization(self):
        r = classify(10**4, 100, LrdSpec(0.9), 1)
        kv = dict(line.split(" = ", 1) for line in r.to_kv().splitlines())
        assert kv["zone"] == "lrd" and float(kv["product"]) == r.product
        assert r.to_csv_row().count(",") == len(RegimeReport.csv_header()) - 1


class TestCovariancePrediction:
    def test_no_volatility(self, pareto2):
        vol = VolatilitySpec.exp(0.0)
        u = 10.0
        v = covariance_prediction(0.0, 0.0, 1000, u, vol, pareto2, LrdSpec(0.9))
        assert v == pytest.approx(1 / (1000 * survival_y(vol, pareto2, u)))

    def test_first_term_vanishes(self, pareto2):
        vol = VolatilitySpec.exp(0.0)
        v = covariance_prediction(0.0, 1e8, 1000, 10.0, vol, pareto2, LrdSpec(0.9))
        assert v < 1e-12

    def test_diagonal_dominates(self):
        vol, noise, lrd = VolatilitySpec.exp(1.0), NoiseSpec(1.0), LrdSpec(0.9)
        u = quantile_u(vol, noise, 16.0)
        for s in (0.0, 0.5):
            for t in (0.5, 1.0):
                if t > s:
                    assert covariance_prediction(s, s, 2**14, u, vol, noise, lrd) >= \
                        covariance_prediction(s, t, 2**14, u, vol, noise, lrd)

    def test_two_terms(self):
        vol, noise, lrd = VolatilitySpec.exp(1.0), NoiseSpec(1.0), LrdSpec(0.9)
        n, k = 2**14, 2**10
        u = quantile_u(vol, noise, n / k)
        v = covariance_prediction(0.0, 1.0, n, u, vol, noise, lrd, fbar_un=k / n)
        first = limit_tail(1.0, 1.0) / k
        rho = 0.72 * n**-0.2
        second = limit_tail(1.0, 1.0) * math.e * rho / 0.8 / math.e
        assert v == pytest.approx(first + second, rel=1e-8)

    def test_short_memory_first_term_only(self):
        vol, noise = VolatilitySpec.exp(1.0), NoiseSpec(1.0)
        with pytest.warns(RuntimeWarning):
            v = covariance_prediction(0.0, 0.0, 1000, 20.0, vol, noise, LrdSpec(0.5, "iid"), fbar_un=0.05)
        assert v == pytest.approx(1 / 50)

    def test_exact_no_volatility_binomial(self, pareto2):
        vol = VolatilitySpec.exp(0.0)
        f = survival_y(vol, pareto2, 10.0)
        v = covariance_exact(0.0, 0.0, 500, 10.0, vol, pareto2, LrdSpec(0.9))
        assert v == pytest.approx((f - f * f) / (500 * f * f))


class TestFeasibility:
    def test_beta_one(self):
        f = feasibility(1.0, 0.7)
        assert f.threshold_h == pytest.approx(2 / 3) and f.lrd_zone_possible
        assert f.k_window == pytest.approx((0.6, 0.7))
        assert not feasibility(1.0, 0.6).lrd_zone_possible

    def test_beta_infinite(self):
        assert feasibility(math.inf, 0.55).threshold_h == 0.5

    def test_beta_quarter(self):
        assert feasibility(0.25, 0.9).threshold_h == pytest.approx(5 / 6)

    def test_domain(self):
        with pytest.raises(ValueError):
            feasibility(1.0, 0.5)


class TestExponentBound:
    @pytest.mark.parametrize("beta,h,expected", [(1.0, 0.9, 2 / 3), (math.inf, 0.75, 1.0), (0.5, 0.6, 0.8)])
    def test_values(self, beta, h, expected):
        assert iid_zone_exponent_bound(beta, h) == pytest.approx(expected)
