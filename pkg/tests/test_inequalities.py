import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anisqg import inequalities as ineq
from anisqg.inequalities import InequalityCase, ParameterRangeError, eval_case, exponents, run_campaign
from anisqg.spectral import Grid, SpectralField, from_spectral, plane_wave, random_band_limited_field, to_spectral

G = Grid.square(64)

# direct evaluation with this package's norm conventions:
# ‖cos x₁‖_∞ = 1, ‖cos x₁‖₂ = π√2, Besov proxy = 1, ‖Λ^σ cos x₁‖₂ = π√2
LOG_SOBOLEV_COS = 0.13492444181628813


class TestExponentTables:
    def test_interp_l2(self):
        assert exponents("interp-l2-a", {"s": 1.0, "delta": 0.5, "axis": 1}) == pytest.approx((1 / 3, 2 / 3))
        assert exponents("interp-l2-b", {"gamma": 0.4, "rho": 0.9, "axis": 2}) == pytest.approx((5 / 9, 4 / 9))

    def test_interp_linf(self):
        assert exponents("interp-linf-a", {"gamma": 0.5, "axis": 1}) == pytest.approx((1 / 3, 2 / 3))
        assert exponents("interp-linf-b", {"delta": 0.5, "rho": 1.0, "axis": 1}) == pytest.approx((0.75, 0.25))

    def test_triple(self):
        e = exponents("triple-mixed", {"p": 4.0, "q": math.inf, "gamma1": 0.5, "gamma2": 0.8})
        assert e == pytest.approx((1.0, 0.5, 0.5, 1.0, 0.0))
        e = exponents("triple-l2", {"gamma1": 0.75, "gamma2": 1.0})
        assert e == pytest.approx((1.0, 1 / 3, 2 / 3, 0.5, 0.5))

    def test_aniso_and_commutator(self):
        assert exponents("aniso-linf", {"delta1": 1.0, "delta2": 2.0}) == pytest.approx((0.25, 0.5, 0.25))
        assert exponents("commutator", {"s": 0.5, "p": 2.0}) == (1.0, 1.0)
        assert exponents("log-sobolev", {"sigma": 1.5}) is None


class TestParameterRanges:
    @pytest.mark.parametrize(
        "case,params",
        [
            ("interp-l2-a", {"s": 2.0, "delta": 0.5, "axis": 1}),
            ("interp-l2-b", {"gamma": 1.0, "rho": 0.5, "axis": 1}),
            ("interp-l2-b", {"gamma": 0.2, "rho": 0.5, "axis": 3}),
            ("triple-mixed", {"p": 4.0, "q": 4.0, "gamma1": 0.25, "gamma2": 0.5}),
            ("triple-l2", {"gamma1": 0.5, "gamma2": 0.75}),
            ("commutator", {"s": 1.0}),
            ("log-sobolev", {"sigma": 1.0}),
            ("aniso-linf", {"delta1": 1.0, "delta2": 1.0}),
        ],
    )
    def test_rejected(self, case, params):
        with pytest.raises(ParameterRangeError):
            InequalityCase(case, params)

    def test_unknown_case(self):
        with pytest.raises(ValueError, match="unknown inequality case"):
            InequalityCase("nope")

    def test_field_count(self):
        with pytest.raises(ValueError, match="field"):
            eval_case("triple-l2", [plane_wave(G, 1, 1)])


class TestEqualityCases:
    def test_interp_l2_b_single_mode(self):
        ev = eval_case(InequalityCase("interp-l2-b", {"gamma": 0.4, "rho": 0.9, "axis": 1}), [plane_wave(G, 5, 0)])
        assert ev.ratio == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("k1,k2", [(1, 0), (3, 4), (7, -2)])
    def test_interp_l2_a_single_mode(self, k1, k2):
        ev = eval_case(InequalityCase("interp-l2-a", {"s": 0.7, "delta": 1.1, "axis": 1}), [plane_wave(G, k1, k2)])
        assert ev.ratio == pytest.approx(1.0, abs=1e-12)

    def test_interp_linf_b_delta_zero(self):
        # δ = 0: both sides reduce to ‖f‖_∞
        f = random_band_limited_field(G, 3, 8, policy="strip-x1")
        ev = eval_case(InequalityCase("interp-linf-b", {"delta": 0.0, "rho": 0.5, "axis": 1}), [f])
        assert ev.ratio == pytest.approx(1.0, abs=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), index=st.integers(0, 10**6))
    def test_interp_l2_never_exceeds_one(self, seed, index):
        for cid in ("interp-l2-a", "interp-l2-b"):
            case = InequalityCase(cid)
            params = ineq.sample_parameters(case, seed, index)
            ev = eval_case(case, ineq.sample_fields(case, Grid.square(32), seed, index, params), params)
            assert ev.ratio <= 1 + 1e-10


class TestCommutator:
    def test_constant_g(self):
        f = random_band_limited_field(G, 1, 8)
        g = to_spectral(np.full(G.shape, 7.0))
        ev = eval_case(InequalityCase("commutator", {"s": 0.5, "p": 2.0}), [f, g])
        assert ev.lhs <= 1e-13 * ev.rhs
        assert ev.ratio <= 1e-13

    def test_two_term_form_vanishes_at_s_zero(self):
        f = random_band_limited_field(G, 1, 8)
        g = random_band_limited_field(G, 2, 8)
        assert np.max(np.abs(ineq.commutator_field(f, g, 0.0, "two-term"))) < 1e-15

    def test_three_term_form_at_s_zero_is_minus_product(self):
        f = random_band_limited_field(G, 1, 8)
        g = random_band_limited_field(G, 2, 8)
        bracket = ineq.commutator_field(f, g, 0.0, "three-term")
        assert np.allclose(bracket, -from_spectral(f) * from_spectral(g), atol=1e-15)

    def test_lp_variant(self):
        f = random_band_limited_field(G, 4, 8)
        g = random_band_limited_field(G, 5, 8)
        ev = eval_case(InequalityCase("commutator", {"s": 0.3, "p": 4.0}), [f, g])
        assert np.isfinite(ev.ratio) and ev.ratio > 0

    def test_unknown_form(self):
        f = plane_wave(G, 1, 0)
        with pytest.raises(ValueError):
            ineq.commutator_field(f, f, 0.5, "four-term")


class TestTriple:
    def _fields(self):
        return [
            random_band_limited_field(G, 11, 8),
            random_band_limited_field(G, 12, 8, policy="strip-x1"),
            random_band_limited_field(G, 13, 8, policy="strip-x2"),
        ]

    def test_lhs_matches_direct_trig_sums(self):
        fs = self._fields()
        X1, X2 = G.mesh()
        values = []
        for f in fs:
            v = np.zeros(G.shape)
            for j2, j1 in zip(*np.nonzero(f.coeffs)):
                k1, k2 = G.k1[j1], G.k2[j2]
                c = f.coeffs[j2, j1]
                v += (c * np.exp(1j * (k1 * X1 + k2 * X2))).real
            values.append(v)
        direct = (2 * math.pi) ** 2 * np.mean(np.abs(values[0] * values[1] * values[2]))
        ev = eval_case(InequalityCase("triple-l2", {"gamma1": 0.75, "gamma2": 0.75}), fs)
        assert ev.lhs == pytest.approx(direct, rel=1e-12)

    def test_lhs_resolution_converged(self):
        fs = self._fields()
        fine = Grid.square(256)
        padded = []
        for f in fs:
            c = np.zeros(fine.shape, complex)
            for j2, j1 in zip(*np.nonzero(f.coeffs)):
                c[G.k2[j2] % 256, G.k1[j1] % 256] = f.coeffs[j2, j1]
            padded.append(SpectralField(fine, c))
        coarse = ineq.triple_integral(*fs)
        assert ineq.triple_integral(*padded) == pytest.approx(coarse, rel=1e-2)

    def test_mixed_matches_l2_case_at_p_q_2(self):
        fs = self._fields()
        a = eval_case(InequalityCase("triple-mixed", {"p": 2.0, "q": 2.0, "gamma1": 0.75, "gamma2": 0.9}), fs)
        b = eval_case(InequalityCase("triple-l2", {"gamma1": 0.75, "gamma2": 0.9}), fs)
        assert a.ratio == pytest.approx(b.ratio, rel=1e-12)


class TestLogSobolev:
    def test_cosine(self):
        c = ineq.log_sobolev_check(plane_wave(G, 1, 0), 1.5)
        assert c.implied_C == pytest.approx(LOG_SOBOLEV_COS, rel=1e-13)
        assert c.implied_C < 1

    def test_zero(self):
        c = ineq.log_sobolev_check(SpectralField.zeros(G), 2.0)
        assert c.implied_C == 0.0

    def test_scaling(self):
        f = random_band_limited_field(G, 6, 8, policy="strip-both")
        one = ineq.log_sobolev_check(f, 1.5)
        two = ineq.log_sobolev_check(f * 2.0, 1.5)
        assert two.lhs == pytest.approx(2 * one.lhs, rel=1e-14)
        assert two.implied_C != one.implied_C
        report = run_campaign(InequalityCase.default("log-sobolev"), 20, [64], seed=0)
        assert two.implied_C <= 2 * report.max_ratio

    def test_sigma_range(self):
        with pytest.raises(ParameterRangeError):
            ineq.log_sobolev_check(plane_wave(G, 1, 0), 1.0)


class TestDegenerateInputs:
    def test_zero_fields_are_degenerate(self):
        ev = eval_case("aniso-linf", [SpectralField.zeros(G)])
        assert ev.degenerate and ev.ratio is None and not ev.hard_violation

    def test_unstripped_field_breaks_homogeneous_bound(self):
        # cos x₁ has no x₂ derivative: RHS = 0 while LHS = 1
        ev = eval_case("aniso-linf", [plane_wave(G, 1, 0)])
        assert ev.hard_violation and ev.ratio == math.inf

    def test_stripping_avoids_it(self):
        report = run_campaign("aniso-linf", 10, [32], seed=3)
        assert report.violations == [] and report.degenerate == 0


class TestCampaigns:
    def test_zero_samples(self):
        r = run_campaign("commutator", 0, [32, 64])
        assert r.samples == 0 and r.violations == [] and r.max_ratio is None
        assert r.resolution_stability is None

    def test_deterministic(self):
        a = run_campaign(InequalityCase("triple-mixed"), 5, [32], seed=9)
        b = run_campaign(InequalityCase("triple-mixed"), 5, [32], seed=9)
        assert a.ratios == b.ratios

    def test_same_parameters_across_resolutions(self):
        case = InequalityCase("interp-linf-b")
        p = [ineq.sample_parameters(case, 4, i) for i in range(5)]
        assert p == [ineq.sample_parameters(case, 4, i) for i in range(5)]
        assert len({tuple(sorted(x.items())) for x in p}) == 5

    def test_ascending_resolutions(self):
        with pytest.raises(ValueError):
            run_campaign("commutator", 1, [64, 32])

    def test_merge(self):
        a = run_campaign("commutator", 3, [32], seed=1)
        b = run_campaign("commutator", 2, [32, 64], seed=2)
        m = a.merge(b)
        assert m.samples == a.samples + b.samples
        assert m.max_ratio == max(a.max_ratio, b.max_ratio)
        with pytest.raises(ValueError):
            a.merge(run_campaign("log-sobolev", 1, [32]))

    def test_summary_fields(self):
        s = run_campaign("triple-l2", 4, [32, 64], seed=0).summary()
        assert set(s) >= {"case", "samples", "max_ratio", "mean_ratio", "quantiles", "per_resolution", "resolution_stability", "violations"}
        assert s["per_resolution"]["32"]["count"] == 4

    def test_exact_cases_enforce_bound(self):
        r = run_campaign("interp-l2-a", 20, [32], seed=5)
        assert r.bound == pytest.approx(1 + 1e-10) and r.violations == []
