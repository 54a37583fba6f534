"""
Tests for windowed densities and the averaged trace.
"""

import numpy as np
import pytest

from varband.analysis.density import (
    PointSet,
    averaged_trace,
    beurling_densities,
    center_grid,
    trace_convergence_report,
)
from varband.errors import ValidationError
from varband.kernel import build_evaluator


class TestPointSet:
    def test_sorted_and_rel(self):
        X = PointSet([3.0, 1.0, 0.5, 0.0, 1.2])
        np.testing.assert_array_equal(X.points, [0.0, 0.5, 1.0, 1.2, 3.0])
        assert X.rel() == 3
        assert X.support == (0.0, 3.0)
        assert not X.has_duplicates()
        assert PointSet([1.0, 1.0]).has_duplicates()
        assert PointSet([]).rel() == 0

    def test_count_is_closed(self):
        X = PointSet(np.arange(10.0))
        assert X.count(2.0, 5.0) == 4

    def test_rejects_nonfinite(self):
        with pytest.raises(ValidationError):
            PointSet([0.0, np.nan])

    def test_load_plain_text(self, tmp_path):
        path = tmp_path / "points.txt"
        path.write_text("# probe\n1.5\n\n-2\n3e0\n", encoding="utf-8")
        np.testing.assert_array_equal(PointSet.load_from_file(path).points, [-2.0, 1.5, 3.0])

    def test_load_csv(self, tmp_path):
        path = tmp_path / "points.csv"
        path.write_text("x,weight\n0.25,1\n-1,1\n", encoding="utf-8")
        np.testing.assert_array_equal(PointSet.load_from_file(path).points, [-1.0, 0.25])

    def test_bad_line_is_reported(self, tmp_path):
        path = tmp_path / "points.txt"
        path.write_text("1.0\n2.0\nthree\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="line 3"):
            PointSet.load_from_file(path)


class TestDensities:
    def test_integer_lattice_flat(self, flat_profile):
        X = PointSet(np.arange(-50.0, 51.0))
        report = beurling_densities(flat_profile, X, [10.0], critical=1.0)
        assert report.lower[0] == pytest.approx(1.0)
        assert report.upper[0] == pytest.approx(1.05)
        assert report.rel == 2
        assert report.to_dict()["critical"] == 1.0

    def test_mu_uniform_points_have_uniform_density(self, figure_profile):
        X = PointSet(figure_profile.mu_uniform_points(-60.0, 60.0, 0.5), support=(-60.0, 60.0))
        report = beurling_densities(figure_profile, X, [5.0, 20.0])
        for lower, upper in zip(report.lower, report.upper):
            assert 2.0 - 0.2 <= lower <= upper <= 2.0 + 0.2

    def test_large_radius_is_omitted(self, flat_profile):
        X = PointSet(np.arange(-5.0, 6.0))
        report = beurling_densities(flat_profile, X, [2.0, 100.0])
        assert report.radii == (2.0,)
        assert report.omitted == (100.0,)

    @pytest.mark.parametrize("radii", [[], [0.0], [5.0, 2.0]])
    def test_invalid_radii(self, flat_profile, radii):
        with pytest.raises(ValidationError):
            beurling_densities(flat_profile, PointSet([0.0, 1.0]), radii)

    def test_center_grid(self):
        centers = center_grid((0.0, 10.0), 2.0)
        assert centers[0] == pytest.approx(2.0)
        assert centers[-1] == pytest.approx(8.0)
        assert center_grid((0.0, 1.0), 2.0).size == 0


class TestTrace:
    def test_flat_trace_is_critical(self, flat_profile, band):
        ev = build_evaluator(flat_profile, band)
        assert averaged_trace(ev, -3.0, 7.5) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValidationError):
            averaged_trace(ev, 1.0, 1.0)

    def test_trace_approaches_critical(self, figure_profile, band):
        ev = build_evaluator(figure_profile, band)
        report = trace_convergence_report(ev, [10.0, 20.0, 40.0, 80.0])
        assert report.critical == pytest.approx(1.0)
        assert len(report.rows) == 4
        assert report.rows[-1].error < 0.05
        assert report.rows[-1].error <= report.rows[0].error + 0.01
        assert all(row.bound_ratio > 1e-12 for row in report.rows)
        assert report.band_factor == 3.0
        assert report.bounded, [row.bound_ratio for row in report.rows]
        assert set(report.to_dict()) == {"critical", "rows", "bounded", "band_factor"}

    def test_flat_report_is_bounded(self, flat_profile, band):
        report = trace_convergence_report(build_evaluator(flat_profile, band), [5.0, 10.0])
        assert report.bounded
        assert all(row.error < 1e-10 for row in report.rows)

    def test_radii_validated(self, flat_profile, band):
        with pytest.raises(ValidationError):
            trace_convergence_report(build_evaluator(flat_profile, band), [10.0, 5.0])
