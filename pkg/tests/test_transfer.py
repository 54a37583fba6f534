"""
Tests for transfer matrices, connection coefficients and fundamental solutions.
"""

import numpy as np
import pytest

from varband.core.appoly import APPoly
from varband.core.piecewise import BandwidthProfile
from varband.core.transfer import (
    Branch,
    build_L,
    build_R,
    connection_table,
    phi,
    phi_local,
    su11_residuals,
    uniform_bound,
    wronskian_identities,
)
from varband.errors import DomainError, ProfileIndexError

SPECTRAL_POINTS = (0.05, 0.7, 1.0, 3.3, 12.5, 19.9)


def test_L_and_R_are_inverse(random_profiles):
    for profile in random_profiles:
        for k in range(1, profile.n + 1):
            L, R = build_L(profile, k), build_R(profile, k)
            for u in SPECTRAL_POINTS:
                np.testing.assert_allclose((L @ R).evaluate(u), np.eye(2), atol=1e-12)
                np.testing.assert_allclose((R @ L).evaluate(u), np.eye(2), atol=1e-12)


def test_determinant_of_L(random_profiles):
    for profile in random_profiles:
        for k in range(1, profile.n + 1):
            det = build_L(profile, k).det()
            assert det.is_constant()
            assert det.constant_term().real == pytest.approx(profile.q[k] / profile.q[k - 1], rel=1e-12)


def test_index_range(figure_profile):
    with pytest.raises(ProfileIndexError):
        build_L(figure_profile, 0)
    with pytest.raises(ProfileIndexError):
        build_R(figure_profile, 3)


def test_boundary_normalization(figure_profile):
    table = connection_table(figure_profile)
    assert table.aplus[-1] == APPoly.constant(1.0)
    assert table.bplus[-1].is_zero()
    assert table.aminus[0].is_zero()
    assert table.bminus[0].constant_term() == 1.0


def test_flat_profile_is_plane_wave(flat_profile):
    table = connection_table(flat_profile)
    x = np.linspace(-5.0, 5.0, 11)
    np.testing.assert_allclose(phi(flat_profile, table, Branch.PLUS, 2.0, x), np.exp(2j * x))
    np.testing.assert_allclose(phi(flat_profile, table, Branch.MINUS, 2.0, x), np.exp(-2j * x))


def test_outer_intervals(figure_profile):
    table = connection_table(figure_profile)
    u = 1.7
    right = np.array([3.5, 8.0])
    left = np.array([-9.0, -3.0])
    np.testing.assert_allclose(phi(figure_profile, table, "+", u, right), np.exp(1j * u * right), atol=1e-13)
    np.testing.assert_allclose(phi(figure_profile, table, "-", u, left), np.exp(-1j * u * left), atol=1e-13)


def test_continuity_of_value_and_flux(random_profiles):
    for profile in random_profiles:
        table = connection_table(profile)
        for branch in Branch:
            for u in SPECTRAL_POINTS:
                for k, t in enumerate(profile.knots, start=1):
                    v_left, d_left, _ = phi_local(profile, table, branch, k - 1, u, t)
                    v_right, d_right, _ = phi_local(profile, table, branch, k, u, t)
                    scale = max(1.0, abs(v_left))
                    assert abs(v_left - v_right) <= 1e-10 * scale
                    flux_left = profile.levels[k - 1] * d_left
                    flux_right = profile.levels[k] * d_right
                    assert abs(flux_left - flux_right) <= 1e-10 * max(1.0, abs(flux_left))


def test_local_solution_solves_equation(figure_profile):
    table = connection_table(figure_profile)
    u, x = 2.3, np.linspace(-2.5, 2.5, 7)
    value, _, second = phi_local(figure_profile, table, Branch.PLUS, 1, u, x)
    np.testing.assert_allclose(-figure_profile.levels[1] * second, u**2 * value, rtol=1e-12)


def test_identities_hold(random_profiles):
    for profile in random_profiles:
        table = connection_table(profile)
        for u in SPECTRAL_POINTS:
            report = wronskian_identities(profile, table, u)
            assert set(report.residuals) == {"wron1", "id1", "hidentity", "wron3", "kappa_chain"}
            assert report.max_residual < 1e-9, report.to_dict()
            assert max(su11_residuals(profile, table, u).values()) < 1e-9


def test_identities_hold_over_wide_level_ratios():
    rng = np.random.default_rng(7)
    for i in range(25):
        profile = BandwidthProfile.random(i % 7, rng)
        table = connection_table(profile)
        for u in rng.uniform(1e-3, 20.0, size=50):
            c = table.evaluate(u)
            # Residuals are sums of squared coefficients; compare against their size.
            scale = max(1.0, max(float(np.max(np.abs(v))) for v in c.values()) ** 2)
            assert wronskian_identities(profile, table, u).max_residual <= 1e-9 * scale
            assert max(su11_residuals(profile, table, u).values()) <= 1e-9 * scale


def test_uniform_bound_holds(random_profiles):
    x = np.linspace(-20.0, 20.0, 201)
    for profile in random_profiles:
        table = connection_table(profile)
        for branch in Branch:
            bound = uniform_bound(profile, branch)
            for u in SPECTRAL_POINTS:
                assert np.max(np.abs(phi(profile, table, branch, u, x))) <= bound


def test_nonpositive_u_rejected(figure_profile):
    table = connection_table(figure_profile)
    with pytest.raises(DomainError):
        phi(figure_profile, table, Branch.PLUS, 0.0, 1.0)
    with pytest.raises(DomainError):
        wronskian_identities(figure_profile, table, -1.0)


def test_table_serializes(figure_profile):
    data = connection_table(figure_profile).to_dict()
    assert set(data) == {"aplus", "bplus", "aminus", "bminus"}
    assert len(data["aplus"]) == 3
