"""
Tests for bandwidth profiles and the mu_p measure.
"""

import json
import math

import numpy as np
import pytest

from varband.core.grid import GridSpec
from varband.core.piecewise import BandwidthProfile, interval_index, mu_p, mu_p_many
from varband.errors import ProfileIndexError, ValidationError


class TestValidation:
    def test_level_count_must_match(self):
        with pytest.raises(ValidationError) as exc:
            BandwidthProfile([0.0], [1.0])
        assert exc.value.field == "levels"

    def test_knots_strictly_increasing(self):
        with pytest.raises(ValidationError) as exc:
            BandwidthProfile([1.0, 1.0], [1.0, 2.0, 3.0])
        assert exc.value.field == "knots[1]"

    @pytest.mark.parametrize("level", [0.0, -1.0, math.inf, math.nan])
    def test_levels_positive_finite(self, level):
        with pytest.raises(ValidationError):
            BandwidthProfile([0.0], [1.0, level])

    def test_nonfinite_knot(self):
        with pytest.raises(ValidationError):
            BandwidthProfile([math.nan], [1.0, 2.0])

    def test_derived_q(self, figure_profile):
        np.testing.assert_allclose(figure_profile.q, [1.0, 2.0, 1.0])
        assert figure_profile.n == 2
        with pytest.raises(ValueError):
            figure_profile.q[0] = 3.0


class TestIntervals:
    def test_knot_belongs_to_left_interval(self, figure_profile):
        assert interval_index(figure_profile, -3.0) == 0
        assert interval_index(figure_profile, -2.999) == 1
        assert interval_index(figure_profile, 3.0) == 1
        assert interval_index(figure_profile, 3.001) == 2

    def test_vectorized_index(self, figure_profile):
        idx = interval_index(figure_profile, np.array([-10.0, 0.0, 10.0]))
        np.testing.assert_array_equal(idx, [0, 1, 2])

    def test_p_matches_levels(self, figure_profile):
        xs = np.array([-5.0, -3.0, 0.0, 3.0, 4.0])
        np.testing.assert_allclose(figure_profile.p(xs), [1.0, 1.0, 0.25, 0.25, 1.0])

    def test_interval_objects(self, figure_profile):
        middle = figure_profile.interval(1)
        assert middle.contains(3.0)
        assert not middle.contains(-3.0)
        assert middle.length == 6.0
        assert math.isinf(figure_profile.interval(0).lo)
        with pytest.raises(ProfileIndexError):
            figure_profile.interval(3)


class TestMeasure:
    def test_flat_measure_is_length(self, flat_profile):
        assert mu_p(flat_profile, -2.5, 4.0) == pytest.approx(6.5)

    def test_measure_across_knots(self, figure_profile):
        assert mu_p(figure_profile, -5.0, 5.0) == pytest.approx(16.0)
        assert mu_p(figure_profile, 0.0, 1.0) == pytest.approx(2.0)
        assert mu_p(figure_profile, 2.0, 2.0) == 0.0

    def test_reversed_interval_rejected(self, figure_profile):
        with pytest.raises(ValidationError):
            mu_p(figure_profile, 1.0, 0.0)

    def test_vectorized_matches_scalar(self, random_profiles):
        rng = np.random.default_rng(1)
        for profile in random_profiles:
            a = rng.uniform(-15, 5, size=20)
            b = a + rng.uniform(0, 20, size=20)
            expected = [mu_p(profile, lo, hi) for lo, hi in zip(a, b)]
            np.testing.assert_allclose(mu_p_many(profile, a, b), expected, rtol=1e-13)

    def test_cumulative_inverse(self, random_profiles):
        xs = np.linspace(-30.0, 30.0, 121)
        for profile in random_profiles:
            m = profile.cumulative_mu(xs)
            assert np.all(np.diff(m) > 0)
            np.testing.assert_allclose(profile.inverse_cumulative_mu(m), xs, atol=1e-10)
            assert profile.cumulative_mu(4.0) - profile.cumulative_mu(-7.0) == pytest.approx(mu_p(profile, -7.0, 4.0))

    def test_mu_uniform_points(self, figure_profile):
        pts = figure_profile.mu_uniform_points(-10.0, 10.0, 0.5)
        assert pts[0] >= -10.0 and pts[-1] <= 10.0
        gaps = np.diff(figure_profile.cumulative_mu(pts))
        np.testing.assert_allclose(gaps, 0.5, rtol=1e-10)
        # Twice as many points per unit length where q = 2.
        assert np.sum((pts > -3) & (pts <= 3)) == pytest.approx(2 * np.sum(pts > 3) * 6 / 7, abs=2)


class TestSerialization:
    def test_json_round_trip(self, random_profiles):
        for profile in random_profiles:
            again = BandwidthProfile.from_dict(json.loads(profile.to_json()))
            assert again == profile
            assert again.knots == profile.knots

    def test_file_round_trip(self, tmp_path, figure_profile):
        path = tmp_path / "profile.json"
        figure_profile.save_to_file(path)
        assert BandwidthProfile.load_from_file(path) == figure_profile

    def test_missing_keys(self):
        with pytest.raises(ValidationError):
            BandwidthProfile.from_dict({"knots": []})

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n"knots": [1,\n}', encoding="utf-8")
        with pytest.raises(ValidationError, match="line"):
            BandwidthProfile.load_from_file(path)


def test_random_profiles_are_seeded():
    first = BandwidthProfile.random(3, np.random.default_rng(7))
    second = BandwidthProfile.random(3, np.random.default_rng(7))
    assert first == second
    assert first.n == 3
    assert all(0.1 <= p <= 10.0 for p in first.levels)


def test_grid_spec():
    spec = GridSpec.parse("-1:1:5")
    np.testing.assert_allclose(spec.points(), [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert str(spec) == "-1:1:5"
    assert GridSpec.symmetric(2.0, 3).points()[0] == -2.0
    for bad in ("1:2", "a:b:c", "1:0:5", "0:1:0"):
        with pytest.raises(ValidationError):
            GridSpec.parse(bad)
