"""
Tests for reproducing kernel evaluation.
"""

import math

import numpy as np
import pytest

from varband.core.grid import GridSpec
from varband.core.piecewise import BandwidthProfile
from varband.errors import ValidationError
from varband.kernel import (
    KernelEvaluator,
    build_evaluator,
    decay_fit,
    diagonal_lower_bound,
    kernel_closed_n2,
    kernel_diagonal,
    kernel_eval,
    kernel_one_jump,
    theta_decompose,
)
from varband.kernel.closed_n2 import block
from varband.spectral import SpectralSet

POINTS = np.array([-7.5, -3.0, -2.2, -0.4, 0.0, 1.3, 3.0, 3.4, 6.1])


def test_flat_kernel_is_classical_sinc(flat_profile, band):
    ev = build_evaluator(flat_profile, band)
    x = np.array([0.0, 0.3, -1.7, 4.25])
    y = np.array([0.0, -1.1, 2.0, 4.0])
    expected = np.sinc(x - y)
    np.testing.assert_allclose(kernel_eval(ev, x, y), expected, atol=1e-14)
    np.testing.assert_allclose(ev.diagonal(np.linspace(-5, 5, 11)), 1.0, atol=1e-14)


def test_flat_kernel_scales_with_bandwidth(flat_profile):
    ev = build_evaluator(flat_profile, SpectralSet.band(4.0))
    x = np.array([0.0, 0.3, -1.7, 4.25, 2.0])
    y = np.array([0.0, -1.1, 2.0, 4.0, -3.5])
    expected = (2.0 / math.pi) * np.sinc(2.0 * (x - y) / math.pi)
    np.testing.assert_allclose(kernel_eval(ev, x, y), expected, atol=1e-10)
    np.testing.assert_allclose(kernel_diagonal(ev, np.linspace(-5, 5, 11)), 2.0 / math.pi, atol=1e-12)


def test_theta_matches_pointwise_product(figure_profile):
    from varband.core.transfer import Branch, connection_table, phi

    table = connection_table(figure_profile)
    u, x, y = 1.9, -4.0, 1.5
    theta = theta_decompose(figure_profile, table, 0, 1)
    direct = (
        np.conj(phi(figure_profile, table, Branch.PLUS, u, x)) * phi(figure_profile, table, Branch.PLUS, u, y) / figure_profile.q0
        + np.conj(phi(figure_profile, table, Branch.MINUS, u, x)) * phi(figure_profile, table, Branch.MINUS, u, y) / figure_profile.qn
    )
    assert theta.evaluate(u, x, y) == pytest.approx(direct, abs=1e-12)
    assert len(theta.terms()) >= len(theta.groups)


def test_one_jump_closed_form(one_jump_profile, band):
    ev = KernelEvaluator(one_jump_profile, band, mode="generic")
    X, Y = np.meshgrid(POINTS, POINTS, indexing="ij")
    np.testing.assert_allclose(ev(X, Y), kernel_one_jump(ev, X, Y), atol=1e-11)


def test_two_jump_closed_form_matches_generic(figure_profile, band):
    closed = KernelEvaluator(figure_profile, band, mode="closed_form_n2")
    generic = KernelEvaluator(figure_profile, band, mode="generic", j_mode="quadrature")
    X, Y = np.meshgrid(POINTS, POINTS, indexing="ij")
    np.testing.assert_allclose(kernel_closed_n2(closed, X, Y), generic(X, Y), atol=1e-8)


def test_closed_form_with_translated_knots(band):
    profile = BandwidthProfile([1.0, 4.5], [1.0, 0.5, 2.0])
    closed = KernelEvaluator(profile, band, mode="closed_form_n2")
    generic = KernelEvaluator(profile, band, mode="generic")
    pts = np.array([-2.0, 1.0, 2.2, 4.5, 5.0, 8.0])
    np.testing.assert_allclose(closed.matrix(pts), generic.matrix(pts), atol=1e-8)


def test_closed_form_on_full_grid(figure_profile, band):
    rng = np.random.default_rng(11)
    profiles = [figure_profile] + [BandwidthProfile.random(2, rng, level_range=(0.25, 4.0)) for _ in range(3)]
    grid = np.linspace(-10.0, 10.0, 41)
    for profile in profiles:
        closed = KernelEvaluator(profile, band, mode="closed_form_n2")
        generic = KernelEvaluator(profile, band, mode="generic")
        diff = np.abs(closed.matrix(grid) - generic.matrix(grid))
        assert diff.max() <= 1e-8, profile.to_dict()


def test_lower_blocks_are_transposed():
    def jr(s):
        return np.cos(s) / (1.0 + s**2)

    args = (5.0, 1.0, 1.5, 0.7, jr, 2.0)
    for j, l in ((1, 0), (2, 0), (2, 1)):
        assert block(j, l)(0.4, -1.3, *args) == pytest.approx(block(l, j)(-1.3, 0.4, *args))


@pytest.mark.parametrize("seed", range(20))
def test_symmetric_and_positive(seed, three_jump_profile, figure_profile, band):
    profile = figure_profile if seed == 0 else three_jump_profile
    ev = KernelEvaluator(profile, band)
    pts = np.sort(np.random.default_rng(seed).uniform(-10.0, 10.0, size=40))
    G = ev.matrix(pts)
    np.testing.assert_allclose(G, G.T, atol=1e-10)
    eig = np.linalg.eigvalsh(0.5 * (G + G.T))
    assert eig[0] >= -1e-8 * eig[-1]


def test_diagonal_formula(three_jump_profile, band):
    ev = KernelEvaluator(three_jump_profile, band)
    y = np.array([-5.0, -2.0, -1.0, 0.0, 1.5, 3.0, 7.0])
    np.testing.assert_allclose(kernel_diagonal(ev, y), ev(y, y), atol=1e-10)
    assert np.all(ev.diagonal(y) > 0)


def test_diagonal_lower_bound(flat_profile, figure_profile, band):
    assert diagonal_lower_bound(build_evaluator(flat_profile, band)) == pytest.approx(0.5, rel=1e-10)
    ev = build_evaluator(figure_profile, band)
    bound = diagonal_lower_bound(ev)
    assert 0 < bound <= np.min(ev.diagonal(np.linspace(-12.0, 12.0, 241))) + 1e-12


def test_reproducing_on_general_spectrum(one_jump_profile):
    # Removing part of the band can only shrink the diagonal.
    full = KernelEvaluator(one_jump_profile, SpectralSet.band(9.0))
    part = KernelEvaluator(one_jump_profile, SpectralSet([[0.0, 1.0], [4.0, 9.0]]))
    y = np.linspace(-3.0, 3.0, 13)
    assert np.all(part.diagonal(y) <= full.diagonal(y) + 1e-12)


def test_decay_fit(flat_profile, figure_profile, band):
    constant, report = decay_fit(build_evaluator(flat_profile, band), GridSpec(-20.0, 20.0, 81))
    assert constant == pytest.approx(1.0, abs=1e-12)
    assert not report.growth
    constant, report = decay_fit(build_evaluator(figure_profile, band), GridSpec(-20.0, 20.0, 81))
    assert math.isfinite(constant)
    assert not report.growth
    assert len(report.to_dict()["band_max"]) == 8


def test_decay_fit_needs_band(one_jump_profile):
    ev = KernelEvaluator(one_jump_profile, SpectralSet([[1.0, 4.0]]))
    with pytest.raises(ValidationError):
        decay_fit(ev, GridSpec(-5.0, 5.0, 11))


def test_mode_validation(flat_profile, three_jump_profile, band):
    with pytest.raises(ValidationError):
        KernelEvaluator(flat_profile, band, mode="closed_form_n2")
    with pytest.raises(ValidationError):
        KernelEvaluator(flat_profile, band, mode="fast")
    ev = KernelEvaluator(three_jump_profile, band)
    with pytest.raises(ValidationError):
        kernel_closed_n2(ev, 0.0, 0.0)


def test_system_status(figure_profile, band):
    status = build_evaluator(figure_profile, band).get_system_status()
    assert status["mode"] == "closed_form_n2"
    assert status["j_evaluator"]["mode"] == "series"
    assert status["theta_terms"] > 0


def test_degenerate_two_jumps_collapse_to_one(band):
    # q_1 = q_2 removes the second jump.
    two = KernelEvaluator(BandwidthProfile([-3.0, 3.0], [1.0, 0.25, 0.25]), band, mode="closed_form_n2")
    one = KernelEvaluator(BandwidthProfile([-3.0], [1.0, 0.25]), band)
    assert two.kappa.is_constant()
    X, Y = np.meshgrid(POINTS, POINTS, indexing="ij")
    np.testing.assert_allclose(two(X, Y), kernel_one_jump(one, X, Y), atol=1e-11)
