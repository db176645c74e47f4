import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anisqg.spectral import (
    DOMAIN_MEASURE,
    Grid,
    HermitianSymmetryError,
    OperatorSpec,
    SpectralField,
    apply_multiplier,
    dealias,
    from_spectral,
    is_dealiased,
    plane_wave,
    random_band_limited_field,
    spectral_divergence,
    symbol,
    to_spectral,
    velocity_pm,
    velocity_sqg,
)

G64 = Grid.square(64)


def mesh(grid):
    return grid.mesh()


class TestGrid:
    def test_shape_is_x2_outer(self):
        g = Grid(16, 8)
        assert g.shape == (8, 16)
        X1, X2 = g.mesh()
        assert X1.shape == (8, 16)
        assert np.all(X1[0] == g.x1) and np.all(X2[:, 0] == g.x2)

    @pytest.mark.parametrize("n1,n2", [(7, 8), (8, 6), (9, 9), (0, 8)])
    def test_rejects_bad_sizes(self, n1, n2):
        with pytest.raises(ValueError):
            Grid(n1, n2)

    def test_dealias_mask_threshold(self):
        g = Grid.square(64)
        assert g.dealias_mask[0, 21] and not g.dealias_mask[0, 22]
        assert g.dealias_mask[21, 0] and not g.dealias_mask[22, 0]


class TestTransforms:
    def test_constant(self):
        f = to_spectral(np.full(G64.shape, 5.0))
        expected = np.zeros(G64.shape)
        expected[0, 0] = 5.0
        assert np.allclose(f.coeffs, expected, atol=1e-14, rtol=0)

    def test_cosine_single_mode(self):
        X1, _ = mesh(G64)
        c = to_spectral(np.cos(X1)).coeffs
        assert abs(c[0, 1] - 0.5) < 1e-13 and abs(c[0, -1] - 0.5) < 1e-13
        c = c.copy()
        c[0, 1] = c[0, -1] = 0
        assert np.max(np.abs(c)) < 1e-13

    def test_round_trip_samples(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(48, 64))
        back = from_spectral(to_spectral(x))
        assert np.max(np.abs(back - x)) <= 1e-13 * np.max(np.abs(x))

    def test_round_trip_coefficients(self):
        f = random_band_limited_field(G64, 11, 16)
        g = to_spectral(from_spectral(f))
        assert np.max(np.abs(g.coeffs - f.coeffs)) <= 1e-13 * np.max(np.abs(f.coeffs))

    def test_zero_and_constant_fields(self):
        assert not np.any(from_spectral(SpectralField.zeros(G64)))
        c = np.zeros(G64.shape, complex)
        c[0, 0] = 3.0
        assert np.allclose(from_spectral(SpectralField(G64, c)), 3.0, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            to_spectral(np.zeros((8, 16)), Grid(8, 16))
        with pytest.raises(ValueError):
            to_spectral(np.zeros(16))

    def test_corrupted_field_detected(self):
        c = np.zeros(G64.shape, complex)
        c[0, 1] = 1.0  # no conjugate partner
        with pytest.raises(HermitianSymmetryError):
            from_spectral(SpectralField(G64, c))

    def test_coefficients_are_immutable(self):
        f = plane_wave(G64, 1, 0)
        with pytest.raises(ValueError):
            f.coeffs[0, 0] = 1.0


class TestMultipliers:
    def test_directional_single_mode(self):
        X1, X2 = mesh(G64)
        f = to_spectral(np.cos(3 * X1))
        out = from_spectral(apply_multiplier(f, OperatorSpec.directional(1, 1.2)))
        assert np.allclose(out, 3**1.2 * np.cos(3 * X1), atol=1e-12)
        assert 3**1.2 == pytest.approx(3.7372, abs=1e-4)

    def test_directional_axis2(self):
        X1, X2 = mesh(G64)
        f = to_spectral(np.cos(3 * X1 + 2 * X2))
        out = from_spectral(apply_multiplier(f, OperatorSpec.directional(2, 1.0)))
        assert np.allclose(out, 2 * np.cos(3 * X1 + 2 * X2), atol=1e-12)

    def test_riesz_of_sine(self):
        X1, _ = mesh(G64)
        out = from_spectral(apply_multiplier(to_spectral(np.sin(X1)), OperatorSpec.riesz(1)))
        assert np.allclose(out, np.cos(X1), atol=1e-13)

    def test_full_fractional_matches_laplacian(self):
        f = random_band_limited_field(G64, 2, 10)
        lap = apply_multiplier(f, OperatorSpec.full(2.0))
        d11 = apply_multiplier(apply_multiplier(f, OperatorSpec.partial(1)), OperatorSpec.partial(1))
        d22 = apply_multiplier(apply_multiplier(f, OperatorSpec.partial(2)), OperatorSpec.partial(2))
        assert np.allclose(lap.coeffs, -(d11 + d22).coeffs, atol=1e-12)

    def test_order_zero_is_identity(self):
        f = random_band_limited_field(G64, 5, 10, policy="keep")
        for op in (OperatorSpec.full(0), OperatorSpec.directional(1, 0), OperatorSpec.directional(2, 0)):
            assert np.array_equal(apply_multiplier(f, op).coeffs, f.coeffs)

    def test_odd_symbols_vanish_on_nyquist(self):
        for op in (OperatorSpec.riesz(1), OperatorSpec.partial(1)):
            assert not np.any(symbol(G64, op)[:, 32])

    def test_order_range(self):
        with pytest.raises(ValueError):
            OperatorSpec.full(4.5)
        with pytest.raises(ValueError):
            OperatorSpec.directional(3, 1.0)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), s=st.floats(0, 2), t=st.floats(0, 2))
    def test_semigroup(self, seed, s, t):
        f = random_band_limited_field(Grid.square(32), seed, 8)
        a = apply_multiplier(apply_multiplier(f, OperatorSpec.directional(1, s)), OperatorSpec.directional(1, t))
        b = apply_multiplier(f, OperatorSpec.directional(1, s + t)) if s + t <= 4 else a
        assert np.allclose(a.coeffs, b.coeffs, rtol=1e-12, atol=1e-14)


class TestVelocity:
    def test_sqg_single_modes(self):
        X1, X2 = mesh(G64)
        u1, u2 = velocity_sqg(to_spectral(np.sin(X1)))
        assert np.allclose(from_spectral(u1), 0, atol=1e-14)
        assert np.allclose(from_spectral(u2), np.cos(X1), atol=1e-13)
        u1, u2 = velocity_sqg(to_spectral(np.sin(X2)))
        assert np.allclose(from_spectral(u1), -np.cos(X2), atol=1e-13)
        assert np.allclose(from_spectral(u2), 0, atol=1e-14)

    def test_pm_single_modes(self):
        X1, X2 = mesh(G64)
        u1, u2 = velocity_pm(to_spectral(np.sin(X1)))
        assert np.allclose(from_spectral(u1), 0, atol=1e-14)
        assert np.allclose(from_spectral(u2), -np.sin(X1), atol=1e-13)
        u1, u2 = velocity_pm(to_spectral(np.sin(X2)))
        assert np.allclose(from_spectral(u1), 0, atol=1e-14)
        assert np.allclose(from_spectral(u2), 0, atol=1e-14)

    @pytest.mark.parametrize("law", [velocity_sqg, velocity_pm])
    @pytest.mark.parametrize("seed", range(5))
    def test_divergence_free(self, law, seed):
        theta = random_band_limited_field(G64, seed, 21)
        div = spectral_divergence(*law(theta))
        l2 = np.sqrt(DOMAIN_MEASURE * np.sum(np.abs(theta.coeffs) ** 2))
        assert np.max(np.abs(div)) <= 1e-14 * l2


class TestDealias:
    def test_inside_mask_unchanged(self):
        f = random_band_limited_field(G64, 1, 21)
        assert is_dealiased(f)
        assert np.array_equal(dealias(f).coeffs, f.coeffs)

    def test_high_mode_removed(self):
        c = np.zeros(G64.shape, complex)
        c[0, 31] = c[0, -31] = 1.0
        assert not np.any(dealias(SpectralField(G64, c)).coeffs)

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        f = to_spectral(rng.normal(size=G64.shape))
        once = dealias(f)
        assert np.array_equal(dealias(once).coeffs, once.coeffs)


class TestRandomFields:
    def test_deterministic(self):
        a = random_band_limited_field(G64, 42, 8)
        b = random_band_limited_field(G64, 42, 8)
        assert a.coeffs.tobytes() == b.coeffs.tobytes()

    @pytest.mark.parametrize("policy,axis", [("strip-x1", 1), ("strip-x2", 0)])
    def test_strip_policies(self, policy, axis):
        f = random_band_limited_field(G64, 4, 8, policy=policy)
        zero_line = f.coeffs[:, 0] if axis == 1 else f.coeffs[0, :]
        assert not np.any(zero_line)

    def test_unit_norm(self):
        f = random_band_limited_field(G64, 9, 8, profile="flat")
        assert np.sqrt(DOMAIN_MEASURE * np.sum(np.abs(f.coeffs) ** 2)) == pytest.approx(1.0, abs=1e-12)

    def test_real_and_band_limited(self):
        f = random_band_limited_field(G64, 9, 8, profile="decaying")
        assert f.hermitian_defect() == 0.0
        assert not np.any(f.coeffs[(np.abs(G64.K1) > 8) | (np.abs(G64.K2) > 8)])

    def test_kmax_range(self):
        with pytest.raises(ValueError):
            random_band_limited_field(G64, 0, 22)


def test_plane_wave_matches_samples():
    X1, X2 = mesh(G64)
    f = plane_wave(G64, 3, -2, amplitude=0.7)
    assert np.allclose(from_spectral(f), 0.7 * np.cos(3 * X1 - 2 * X2), atol=1e-14)
    s = plane_wave(G64, 1, 4, phase="sin")
    assert np.allclose(from_spectral(s), np.sin(X1 + 4 * X2), atol=1e-14)
