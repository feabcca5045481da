import math

import numpy as np
import pytest

from bootperc import ValidationError
from bootperc.thresholds import (
    Regime,
    classify_regime,
    critical_a,
    critical_a_plus,
    er_thresholds,
    f_choice,
    first_moment_bound,
    first_moment_term,
    gap_boundary,
    p_inf,
    p_inf_raw,
    phi,
    phi1,
    supercritical_witness,
    threshold_report,
)
from bootperc.weights import WeightSequence, build_weights, moment_sum


class TestCriticalA:
    def test_example(self):
        res = critical_a(1e6, 2.5, 2 / 3, 2)
        assert res.exponent == pytest.approx(1 / 3, abs=1e-15)
        assert res.value == pytest.approx(100.0, rel=1e-12)
        assert res.value == pytest.approx(1e6 ** (0.5 / 1.5), rel=1e-12)

    @pytest.mark.parametrize("r", range(2, 7))
    def test_r_independent_at_top(self, r):
        for beta in (2.1, 2.5, 2.9):
            res = critical_a(1e6, beta, 1 / (beta - 1), r)
            assert res.exponent == pytest.approx((beta - 2) / (beta - 1), abs=1e-14)

    def test_rounded_zeta(self):
        assert critical_a(1e6, 2.5, 0.6667, 2).value == pytest.approx(100.0, rel=1e-12)

    def test_bad_beta(self):
        with pytest.raises(ValidationError, match="beta must lie in"):
            critical_a(1e6, 3.5, 0.3, 2)


class TestCriticalAPlus:
    def test_example(self):
        res = critical_a_plus(1e4, 2.5, 0.2, 3)
        assert res.exponent == pytest.approx(0.75)
        assert res.value == pytest.approx(1000.0, rel=1e-12)

    def test_small_zeta_near_linear(self):
        assert critical_a_plus(1e4, 2.5, 1e-9, 2).exponent == pytest.approx(1.0, abs=1e-8)

    def test_outside_gap(self):
        with pytest.raises(ValidationError, match="critical_a"):
            critical_a_plus(1e4, 2.5, 0.41, 2)


class TestRegime:
    def test_boundary(self):
        assert gap_boundary(2.5, 2) == pytest.approx(0.4)

    @pytest.mark.parametrize("zeta, regime", [
        (0.6, Regime.SHARP_CASE_I), (0.5, Regime.SHARP_CASE_II),
        (0.4, Regime.GAP_CASE_III), (0.3, Regime.GAP_CASE_III),
    ])
    def test_examples(self, zeta, regime):
        assert classify_regime(2.5, zeta, 2) is regime


class TestEr:
    def test_first_example(self):
        t = er_thresholds(10**6, 1e-4, 2)
        assert t.t_c == pytest.approx(100.0)
        assert t.a_c == pytest.approx(50.0)
        assert t.b_c == pytest.approx(1e8 * math.exp(-100), rel=1e-9)
        assert t.b_c == pytest.approx(3.72e-36, rel=1e-2)

    def test_second_example(self):
        t = er_thresholds(10**5, 2e-4, 2)
        assert t.t_c == pytest.approx(250.0)
        assert t.a_c == pytest.approx(125.0)

    @pytest.mark.parametrize("r", [2, 3, 5])
    def test_identities(self, r):
        N, p = 12345, 3e-3
        t = er_thresholds(N, p, r)
        assert t.a_c == pytest.approx((1 - 1 / r) * t.t_c, rel=1e-14)
        assert t.t_c == pytest.approx((math.factorial(r - 1) / (N * p ** r)) ** (1 / (r - 1)), rel=1e-12)
        assert t.b_c >= 0

    def test_b_c_underflow_safe(self):
        assert er_thresholds(10**7, 0.5, 2).b_c == 0.0


class TestPhi:
    def test_examples(self):
        assert phi(0.0, 2) == 0.0
        assert phi(1.0, 3) == pytest.approx(1.0, abs=1e-12)
        assert phi(0.75, 2) == pytest.approx(0.5, abs=1e-12)
        assert phi1(0.0, 2) == 1.0
        assert phi1(0.75, 2) == pytest.approx(4 / 3, abs=1e-11)
        assert phi1(1.0, 2) == pytest.approx(2.0, abs=1e-11)

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_residual_and_monotone(self, r):
        alphas = np.linspace(0, 1, 1000)
        vals = np.array([phi(a, r) for a in alphas])
        res = np.abs(r * vals - vals ** r - (r - 1) * alphas)
        assert res.max() <= 1e-12
        assert np.all(np.diff(vals) >= 0)

    def test_closed_form_r2(self):
        for a in np.linspace(0, 1, 50):
            assert phi(a, 2) == pytest.approx(1 - math.sqrt(1 - a), abs=1e-11)

    def test_phi1_continuous(self):
        assert abs(phi1(1e-8, 2) - 1) <= 1e-4
        assert abs(phi1(1e-8, 4) - 1) <= 1e-4

    def test_domain(self):
        with pytest.raises(ValidationError):
            phi(1.5, 2)
        with pytest.raises(ValidationError):
            phi(-0.1, 2)


class TestFChoice:
    def test_example(self):
        res = f_choice(1000, 3000, 30, 1.0, 2.5, 2)
        assert res.value == pytest.approx(300 ** 0.4, rel=1e-12)
        assert res.value == pytest.approx(9.79, abs=5e-3)

    def test_unit_bracket(self):
        W, n, g1 = 3000.0, 1000, 1.0
        a = W ** 2 / (g1 * n)
        assert f_choice(n, W, a, g1, 2.5, 2).value == pytest.approx(1.0)

    def test_homogeneity(self):
        f1 = f_choice(1000, 3000, 30, 1.0, 2.5, 2).value
        f2 = f_choice(1000, 3000, 60, 1.0, 2.5, 2).value
        assert f1 / f2 == pytest.approx(2 ** 0.4)

    def test_flags(self, ws1000):
        res = f_choice(1000, 3000, 30, 1.0, 2.5, 2, ws=ws1000)
        assert res.kernel_size == ws1000.count_at_least(res.value)
        assert res.below_cap and res.a_below_kernel and res.af_below_n


class TestBounds:
    def test_p_inf(self):
        assert p_inf(30, 10, 1, 3000, 2) == pytest.approx(2.5e-3)
        assert p_inf(0, 10, 1, 3000, 2) == 0.0
        assert p_inf_raw(1, 1, 1, 1, 2) == pytest.approx(0.25)
        assert p_inf(1e6, 1e3, 1, 3000, 2) == 1.0

    def test_first_moment_term(self):
        assert first_moment_term(10, 1e4, 100, 2) == pytest.approx(1.847e-2, rel=1e-3)

    def test_first_moment_bound(self):
        ws = build_weights(100_000, 2.5, 2 / 3, 1.0)
        b = first_moment_bound(ws, 4, 2)
        # brute-force fsum oracle
        assert b == pytest.approx(0.0485138, rel=1e-5)
        assert b < 0.1
        assert first_moment_bound(ws, 0, 2) == 0.0
        assert b == pytest.approx((math.e * 4 / (2 * ws.n)) ** 2 * moment_sum(ws, 2))

    def test_first_moment_bound_rejects_large_a(self, ws1000):
        with pytest.raises(ValidationError):
            first_moment_bound(ws1000, 1001, 2)


class TestWitness:
    ws = build_weights(100_000, 2.5, 2 / 3, 1.0)

    def test_supercritical(self):
        a_c = critical_a(1e5, 2.5, 2 / 3, 2).value
        w = supercritical_witness(self.ws, 20 * a_c, 2)
        assert w.regime is Regime.SHARP_CASE_I
        assert w.satisfied and w.nf_p_inf > 2
        assert w.kernel_size > 0 and w.note == ""

    def test_subcritical(self):
        a_c = critical_a(1e5, 2.5, 2 / 3, 2).value
        w = supercritical_witness(self.ws, a_c / 10, 2)
        assert not w.satisfied

    def test_gap_regime_runs(self):
        ws = build_weights(100_000, 2.5, 0.3, 1.0)
        a = 50 * critical_a_plus(1e5, 2.5, 0.3, 2).value
        w = supercritical_witness(ws, a, 2)
        assert w.regime is Regime.GAP_CASE_III
        assert w.t_c is None or w.t_c > 0

    def test_kernel_empty(self):
        # every weight sits below the smallest admissible cutoff x0
        ws = WeightSequence(np.ones(4), 2.5, 0.5, 2.0)
        w = supercritical_witness(ws, 2, 2)
        assert not w.satisfied
        assert w.kernel_size == 0 and w.note == "kernel empty"
        assert supercritical_witness(ws, 0, 2).note == "no seeds"


def test_report_json():
    rep = threshold_report(10**6, 2.5, 0.6667, 2)
    d = rep.to_json()
    assert d["a_c"] == pytest.approx(100.0, rel=1e-9)
    assert d["regime"] == "SharpCaseI" and d["a_c_plus"] is None
    rep = threshold_report(10**4, 2.5, 0.2, 3)
    assert rep.a_c_plus == pytest.approx(1000.0)
    rep = threshold_report(10**4, 2.5, 2 / 3, 2, a=30)
    assert rep.f_n is not None and 0 <= rep.p_inf <= 1
    assert rep.first_moment_bound > 0
