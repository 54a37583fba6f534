"""
Densities and Averaged Trace
============================

Windowed Beurling densities of point sets measured in mu_p, and the
averaged trace of the reproducing kernel over growing intervals.

Features:
- Point sets with rel(X), read from text or CSV
- Lower and upper windowed densities per radius over admissible centers
- Averaged trace by knot-aligned Gauss-Legendre panels
- Trace convergence table against the critical value |Lambda^(1/2)| / pi
"""

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from varband.config import settings
from varband.core.piecewise import BandwidthProfile, mu_p, mu_p_many
from varband.errors import ValidationError
from varband.kernel.evaluator import KernelEvaluator
from varband.spectral.quadrature import panel_rule


@dataclass(frozen=True)
class PointSet:
    """
    Finite sorted point set.

    Attributes:
        points: Sorted coordinates, duplicates allowed
        support: Interval (lo, hi) the set is considered to fill
    """

    points: np.ndarray
    support: Tuple[float, float]

    def __init__(self, points: Sequence[float], support: Optional[Tuple[float, float]] = None) -> None:
        pts = np.sort(np.asarray(points, dtype=float).ravel())
        if pts.size and not np.all(np.isfinite(pts)):
            raise ValidationError("points must be finite", field="points")
        if support is None:
            support = (float(pts[0]), float(pts[-1])) if pts.size else (0.0, 0.0)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "support", (float(support[0]), float(support[1])))

    def __len__(self) -> int:
        return int(self.points.size)

    def count(self, a: Union[float, np.ndarray], b: Union[float, np.ndarray]) -> np.ndarray:
        """Number of points in [a, b]."""
        return np.searchsorted(self.points, b, side="right") - np.searchsorted(self.points, a, side="left")

    def rel(self) -> int:
        """max over x of #(X in [x, x + 1]); attained with x at a point of X."""
        if not self.points.size:
            return 0
        return int(np.max(self.count(self.points, self.points + 1.0)))

    def has_duplicates(self) -> bool:
        return bool(np.any(np.diff(self.points) == 0.0))

    @classmethod
    def load_from_file(cls, path: Union[str, Path]) -> "PointSet":
        """
        Read one float per line, or a CSV file with an x column.

        Blank lines and lines starting with # are skipped.
        """
        text = Path(path).read_text(encoding="utf-8")
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        is_csv = bool(lines) and ("," in lines[0] or lines[0].strip() == "x")
        if is_csv:
            reader = csv.DictReader(io.StringIO("\n".join(lines)))
            if "x" not in (reader.fieldnames or []):
                raise ValidationError("CSV point file needs an 'x' column", field=str(path))
            rows = list(reader)
            raw = [(i + 2, row["x"]) for i, row in enumerate(rows)]
        else:
            raw = [(i + 1, ln.strip()) for i, ln in enumerate(lines)]
        values = []
        for lineno, item in raw:
            try:
                values.append(float(item))
            except (TypeError, ValueError) as e:
                raise ValidationError(f"line {lineno}: not a number: {item!r}", field=str(path)) from e
        return cls(values)


@dataclass(frozen=True)
class DensityReport:
    """
    Windowed mu_p densities per radius.

    Attributes:
        radii: Radii with at least one admissible center
        lower: inf over centers of #(X in B_r(x)) / mu_p(B_r(x))
        upper: sup over the same centers
        critical: |Lambda^(1/2)| / pi, or None when no spectrum was given
        rel: rel(X)
        omitted: Radii without admissible centers
    """

    radii: Tuple[float, ...]
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    critical: Optional[float]
    rel: int
    omitted: Tuple[float, ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "radii": list(self.radii),
            "lower": list(self.lower),
            "upper": list(self.upper),
            "critical": self.critical,
            "rel": self.rel,
            "omitted": list(self.omitted),
        }


def center_grid(support: Tuple[float, float], r: float, spacing: Optional[float] = None) -> np.ndarray:
    """Centers x with [x - r, x + r] inside the support, spaced min(0.1, r/100)."""
    lo, hi = support[0] + r, support[1] - r
    if hi < lo:
        return np.empty(0)
    step = spacing if spacing is not None else min(0.1, r / 100.0)
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def beurling_densities(
    profile: BandwidthProfile,
    X: PointSet,
    radii: Sequence[float],
    critical: Optional[float] = None,
    spacing: Optional[float] = None,
) -> DensityReport:
    """
    Windowed lower and upper mu_p densities of X.

    Args:
        profile: Bandwidth profile defining mu_p
        X: Point set
        radii: Positive increasing radii
        critical: Critical density to embed in the report
        spacing: Center spacing; default min(0.1, r/100)

    Returns:
        DensityReport
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValidationError("radii must be positive and strictly increasing", field="radii")

    kept, lower, upper, omitted = [], [], [], []
    for r in radii:
        centers = center_grid(X.support, r, spacing)
        if centers.size == 0:
            logger.warning(f"No admissible centers for radius {r:g}; radius omitted")
            omitted.append(r)
            continue
        counts = X.count(centers - r, centers + r)
        ratios = counts / mu_p_many(profile, centers - r, centers + r)
        kept.append(r)
        lower.append(float(np.min(ratios)))
        upper.append(float(np.max(ratios)))
    return DensityReport(tuple(kept), tuple(lower), tuple(upper), critical, X.rel(), tuple(omitted))


def trace_rule(ev: KernelEvaluator, a: float, b: float, panels_per_unit: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite rule on [a, b] with panels split at knots.

    Panel width on I_j is at most pi / (2 q_j u_max), divided by the
    refinement factor panels_per_unit when given.
    """
    profile = ev.profile
    cuts = [a, *[t for t in profile.knots if a < t < b], b]
    u_max = ev.spectral_set.u_max
    refine = panels_per_unit or 1.0
    edges = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        j = int(np.searchsorted(np.asarray(profile.knots), 0.5 * (lo + hi), side="left"))
        width = math.pi / (2.0 * float(profile.q[j]) * u_max * refine)
        count = max(1, math.ceil((hi - lo) / width))
        edges.append(np.linspace(lo, hi, count + 1)[:-1])
    edges.append(np.array([b]))
    return panel_rule(np.concatenate(edges), settings.gl_order)


def averaged_trace(ev: KernelEvaluator, a: float, b: float, refine: float = 1.0) -> float:
    """
    (1 / mu_p([a, b])) * integral of k(y, y) over [a, b].

    Args:
        ev: Kernel evaluator
        a: Left end
        b: Right end, b > a
        refine: Panel refinement factor

    Returns:
        Averaged trace
    """
    if not b > a:
        raise ValidationError(f"trace interval needs a < b, got [{a}, {b}]", field="interval")
    nodes, weights = trace_rule(ev, a, b, refine)
    total = float(np.dot(weights, ev.diagonal(nodes)))
    return total / mu_p(ev.profile, a, b)


@dataclass(frozen=True)
class TraceRow:
    r: float
    trace: float
    error: float
    bound_ratio: float


@dataclass(frozen=True)
class TraceReport:
    """
    Convergence of the averaged trace over [-r, r].

    Attributes:
        critical: |Lambda^(1/2)| / pi
        rows: One row per radius
        bounded: True when the nonzero bound ratios stay within band_factor of each other
        band_factor: Allowed spread
    """

    critical: float
    rows: Tuple[TraceRow, ...]
    bounded: bool
    band_factor: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "critical": self.critical,
            "rows": [row.__dict__ for row in self.rows],
            "bounded": self.bounded,
            "band_factor": self.band_factor,
        }


def trace_convergence_report(ev: KernelEvaluator, r_list: Sequence[float], band_factor: Optional[float] = None) -> TraceReport:
    """
    Averaged trace over [-r, r] for increasing r.

    Args:
        ev: Kernel evaluator
        r_list: Increasing radii
        band_factor: Allowed spread of bound ratios; default settings.trace_band

    Returns:
        TraceReport with error = |trace - critical| and bound_ratio = error sqrt(mu_p)
    """
    r_list = [float(r) for r in r_list]
    if not r_list or any(b <= a for a, b in zip(r_list, r_list[1:])) or r_list[0] <= 0:
        raise ValidationError("radii must be positive and strictly increasing", field="radii")
    band = band_factor if band_factor is not None else settings.trace_band
    critical = ev.spectral_set.critical_density
    rows = []
    for r in r_list:
        tr = averaged_trace(ev, -r, r)
        err = abs(tr - critical)
        rows.append(TraceRow(r=r, trace=tr, error=err, bound_ratio=err * math.sqrt(mu_p(ev.profile, -r, r))))
        logger.debug(f"trace r={r:g}: {tr:.12g} (error {err:.3e})")
    ratios = [row.bound_ratio for row in rows if row.bound_ratio > 1e-12]
    bounded = not ratios or max(ratios) <= band * min(ratios)
    return TraceReport(critical=critical, rows=tuple(rows), bounded=bounded, band_factor=band)
