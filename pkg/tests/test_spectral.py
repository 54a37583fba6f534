"""
Tests for spectral sets, kappa and the J evaluators.
"""

import math

import numpy as np
import pytest
from scipy.special import hyp2f1

from varband.core.transfer import connection_table
from varband.errors import DomainError, ValidationError
from varband.spectral import (
    ElementaryJ,
    QuadratureJ,
    SeriesJ,
    SpectralSet,
    TwoJumpConstants,
    j_series,
    jr_coefficients,
    kappa_of,
    make_j_evaluator,
    spectral_density_matrix,
    spectral_density_matrix_u,
)


def _kappa(profile):
    return kappa_of(profile, connection_table(profile))


class TestSpectralSet:
    def test_band(self, band):
        assert band.is_band()
        assert band.sqrt_measure == pytest.approx(math.pi)
        assert band.critical_density == pytest.approx(1.0)
        assert band.u_max == pytest.approx(math.pi)

    def test_union_is_sorted(self):
        spectrum = SpectralSet([[9.0, 16.0], [1.0, 4.0]])
        assert spectrum.intervals == ((1.0, 4.0), (9.0, 16.0))
        assert spectrum.sqrt_measure == pytest.approx(2.0)
        assert spectrum.omega is None

    @pytest.mark.parametrize(
        "intervals",
        [[], [[-1.0, 2.0]], [[2.0, 1.0]], [[0.0, 2.0], [1.0, 3.0]], [[0.0, math.inf]], [[1.0]]],
    )
    def test_invalid(self, intervals):
        with pytest.raises(ValidationError):
            SpectralSet(intervals)

    def test_round_trip(self):
        spectrum = SpectralSet([[0.5, 2.0], [3.0, 4.0]])
        assert SpectralSet.from_dict(spectrum.to_dict()) == spectrum


class TestKappa:
    def test_flat_kappa_is_one(self, flat_profile):
        kappa = _kappa(flat_profile)
        assert kappa.is_constant()
        assert kappa(2.0) == pytest.approx(1.0)
        assert kappa.lower_bound == 1.0

    def test_one_jump_kappa_is_constant(self, one_jump_profile):
        kappa = _kappa(one_jump_profile)
        q0, q1 = one_jump_profile.q
        assert kappa.is_constant()
        assert kappa.cosine_view.c0 == pytest.approx((1 + q0 / q1) ** 2 / (4 * q0**2))

    def test_two_jump_cosine_form(self, figure_profile):
        kappa = _kappa(figure_profile)
        view = kappa.cosine_view
        assert view.c0 == pytest.approx(1.28125, rel=1e-13)
        assert len(view.terms) == 1
        c, lam = view.terms[0]
        assert c == pytest.approx(-0.28125, rel=1e-12)
        assert lam == pytest.approx(24.0, rel=1e-13)
        constants = TwoJumpConstants.from_profile(figure_profile)
        assert (constants.C, constants.K, constants.zeta) == pytest.approx((1.28125, -0.28125, 24.0))
        constants.check_against(kappa)

    def test_two_jump_constants_on_random_profiles(self):
        from varband.core.piecewise import BandwidthProfile

        rng = np.random.default_rng(21)
        for _ in range(10):
            profile = BandwidthProfile.random(2, rng)
            kappa = _kappa(profile)
            constants = TwoJumpConstants.from_profile(profile)
            constants.check_against(kappa, tol=1e-12)

    def test_lower_bound(self, random_profiles):
        u = np.linspace(0.0, 30.0, 3001)
        for profile in random_profiles:
            kappa = _kappa(profile)
            assert np.min(kappa(u)) >= kappa.lower_bound * (1 - 1e-12)
            assert np.max(np.abs(np.imag(kappa.poly(u)))) < 1e-12 * max(1.0, kappa.poly.magnitude)

    def test_density_matrices(self, figure_profile):
        kappa = _kappa(figure_profile)
        u = 1.3
        dens_u = spectral_density_matrix_u(kappa, figure_profile, u)
        dens_lam = spectral_density_matrix(kappa, figure_profile, u**2)
        np.testing.assert_allclose(dens_u, dens_lam * 2 * u, rtol=1e-14)
        assert dens_u[0, 1] == 0.0
        assert dens_u[0, 0] == pytest.approx(1.0 / (2 * math.pi * kappa(u)))
        with pytest.raises(DomainError):
            spectral_density_matrix(kappa, figure_profile, 0.0)


class TestEvaluatorChoice:
    def test_auto_modes(self, flat_profile, figure_profile, three_jump_profile, band):
        assert isinstance(make_j_evaluator(_kappa(flat_profile), band, flat_profile), ElementaryJ)
        assert isinstance(make_j_evaluator(_kappa(figure_profile), band, figure_profile), SeriesJ)
        assert isinstance(make_j_evaluator(_kappa(three_jump_profile), band, three_jump_profile), QuadratureJ)

    def test_unknown_mode(self, flat_profile, band):
        with pytest.raises(ValidationError):
            make_j_evaluator(_kappa(flat_profile), band, flat_profile, mode="magic")

    def test_series_needs_band(self, figure_profile):
        with pytest.raises(ValidationError):
            SeriesJ(_kappa(figure_profile), SpectralSet([[1.0, 4.0]]), figure_profile)

    def test_elementary_needs_constant_kappa(self, figure_profile, band):
        with pytest.raises(ValidationError):
            ElementaryJ(_kappa(figure_profile), band)

    def test_ratio_below_one_and_auto_fallback(self, band, random_profiles):
        from varband.core.piecewise import BandwidthProfile

        for profile in random_profiles:
            if profile.n == 2:
                assert abs(TwoJumpConstants.from_profile(profile).R) < 1.0
        # q = (1, 0.01, 1) gives |R| close to one, beyond the series threshold.
        profile = BandwidthProfile([0.0, 1.0], [1.0, 1e4, 1.0])
        assert 0.95 < abs(TwoJumpConstants.from_profile(profile).R) < 1.0
        assert isinstance(make_j_evaluator(_kappa(profile), band, profile), QuadratureJ)


class TestJValues:
    def test_flat_J(self, flat_profile, band):
        jev = make_j_evaluator(_kappa(flat_profile), band, flat_profile)
        assert jev(0.0) == pytest.approx(0.5)
        s = np.array([-3.0, -0.5, 0.7, 2.0])
        expected = (np.exp(1j * math.pi * s) - 1) / (2j * math.pi * s)
        np.testing.assert_allclose(jev(s), expected, atol=1e-14)

    def test_quadrature_matches_elementary(self, one_jump_profile):
        spectrum = SpectralSet([[0.0, 2.0], [4.0, 9.0]])
        kappa = _kappa(one_jump_profile)
        s = np.linspace(-40.0, 40.0, 81)
        np.testing.assert_allclose(QuadratureJ(kappa, spectrum)(s), ElementaryJ(kappa, spectrum)(s), atol=1e-11)

    def test_series_matches_quadrature(self, figure_profile, band):
        kappa = _kappa(figure_profile)
        series = SeriesJ(kappa, band, figure_profile)
        s = np.linspace(-50.0, 50.0, 101)
        np.testing.assert_allclose(series(s), QuadratureJ(kappa, band)(s), atol=1e-10)

    def test_series_matches_quadrature_on_random_profiles(self, band):
        from varband.core.piecewise import BandwidthProfile

        rng = np.random.default_rng(3)
        s = rng.uniform(-50.0, 50.0, size=200)
        for _ in range(3):
            profile = BandwidthProfile.random(2, rng, level_range=(0.25, 4.0))
            kappa = _kappa(profile)
            value, _, bound = j_series(SeriesJ(kappa, band, profile), s, 1e-10)
            assert bound <= 1e-10
            np.testing.assert_allclose(value, QuadratureJ(kappa, band)(s), atol=1e-9)

    def test_series_error_bound_is_honest(self, figure_profile, band):
        kappa = _kappa(figure_profile)
        series = SeriesJ(kappa, band, figure_profile)
        reference = QuadratureJ(kappa, band)(np.linspace(-30.0, 30.0, 61))
        for order in range(6):
            partial = series.partial_sum(np.linspace(-30.0, 30.0, 61), order)
            assert np.max(np.abs(partial - reference)) <= series.error_bound(order) + 1e-10

    def test_order_selection(self, figure_profile, band):
        series = SeriesJ(_kappa(figure_profile), band, figure_profile)
        value, order, bound = j_series(series, 1.5, 1e-6)
        assert bound <= 1e-6
        assert order == 0 or series.error_bound(order - 1) > 1e-6
        assert abs(value - series(1.5)) <= bound + 1e-13
        with pytest.raises(ValidationError):
            series.order_for(0.0)

    def test_weighted_integral_is_shift_sum(self, three_jump_profile, band):
        from varband.core.appoly import APPoly

        jev = QuadratureJ(_kappa(three_jump_profile), band)
        g = APPoly([-2.0, 0.5], [1.5, -0.5j])
        s = np.array([-1.0, 0.0, 3.0])
        np.testing.assert_allclose(jev.integrate(g, s), 1.5 * jev(s - 2.0) - 0.5j * jev(s + 0.5), atol=1e-13)


class TestRealPartCoefficients:
    def test_hypergeometric_closed_form(self, figure_profile, band):
        series = SeriesJ(_kappa(figure_profile), band, figure_profile)
        C, R = series.constants.C, series.constants.R
        W = math.sqrt(band.omega)
        kmax = 6
        coefs = jr_coefficients(series, kmax)
        for k in range(-kmax, kmax + 1):
            m = abs(k)
            expected = W / (2 * math.pi * C) * (-R / 2) ** m * hyp2f1((m + 1) / 2, (m + 2) / 2, m + 1, R**2)
            assert coefs[kmax + k] == pytest.approx(expected, rel=1e-12)

    def test_sinc_expansion_at_integers(self, figure_profile, band):
        # With sqrt(Omega) = pi and zeta = 24 the sincs vanish at integers off 24Z.
        series = SeriesJ(_kappa(figure_profile), band, figure_profile)
        coefs = jr_coefficients(series, 3)
        s = np.arange(-50, 51)
        off_lattice = s[s % 24 != 0].astype(float)
        np.testing.assert_allclose(series.real_part(off_lattice), 0.0, atol=1e-10)
        on_lattice = 24.0 * np.arange(-3, 4)
        np.testing.assert_allclose(series.real_part(on_lattice), coefs, rtol=1e-10, atol=1e-13)

    def test_sinc_expansion_matches_quadrature(self, figure_profile, band):
        kappa = _kappa(figure_profile)
        series = SeriesJ(kappa, band, figure_profile)
        kmax = 15
        coefs = jr_coefficients(series, kmax)
        zeta, W = series.constants.zeta, math.sqrt(band.omega)
        s = np.linspace(-50.0, 50.0, 1001)
        shifts = zeta * np.arange(-kmax, kmax + 1)
        expansion = np.sinc(W * np.subtract.outer(s, shifts) / math.pi) @ coefs
        np.testing.assert_allclose(expansion, QuadratureJ(kappa, band).real_part(s), atol=2e-8)

    def test_info(self, figure_profile, band):
        info = SeriesJ(_kappa(figure_profile), band, figure_profile).get_evaluator_info()
        assert isinstance(info, dict)
        assert info["mode"] == "series"
        assert info["zeta"] == pytest.approx(24.0)
        assert info["bound"] <= 1e-13
