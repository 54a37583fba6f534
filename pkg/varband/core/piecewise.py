"""
Bandwidth Profiles
==================

Piecewise-constant bandwidth profiles p and the measure mu_p with density
p(x)^(-1/2).

A profile with knots t_1 < ... < t_n and levels p_0, ..., p_n takes the value
p_k on I_k = (t_k, t_{k+1}], with I_0 = (-inf, t_1] and I_n = (t_n, inf).

Features:
- Validated immutable profile with derived q_k = p_k^(-1/2)
- Interval lookup under the half-open (t_k, t_{k+1}] convention
- Exact mu_p of intervals, its cumulative function and inverse
- mu_p-uniform point construction and seeded random profiles
- Lossless JSON round trip
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from varband.errors import ProfileIndexError, ValidationError


@dataclass(frozen=True)
class Interval:
    """One interval of the partition, possibly unbounded."""

    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = False

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValidationError(f"empty interval ({self.lo}, {self.hi})", field="interval")

    def contains(self, x: float) -> bool:
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class BandwidthProfile:
    """
    Piecewise-constant bandwidth profile.

    Attributes:
        knots: Strictly increasing jump locations t_1, ..., t_n
        levels: Positive values p_0, ..., p_n
        q: Derived local frequency scales q_k = p_k^(-1/2)
    """

    knots: tuple
    levels: tuple
    q: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, knots: Sequence[float] = (), levels: Sequence[float] = (1.0,)) -> None:
        knots_t = tuple(float(t) for t in knots)
        levels_t = tuple(float(p) for p in levels)

        if len(levels_t) != len(knots_t) + 1:
            raise ValidationError(
                f"expected {len(knots_t) + 1} levels for {len(knots_t)} knots, got {len(levels_t)}",
                field="levels",
            )
        for i, t in enumerate(knots_t):
            if not math.isfinite(t):
                raise ValidationError(f"knot {i} is not finite", field=f"knots[{i}]")
        for i in range(1, len(knots_t)):
            if not knots_t[i - 1] < knots_t[i]:
                raise ValidationError("knots must be strictly increasing", field=f"knots[{i}]")
        for i, p in enumerate(levels_t):
            if not (math.isfinite(p) and p > 0):
                raise ValidationError(f"level must be positive and finite, got {p}", field=f"levels[{i}]")

        object.__setattr__(self, "knots", knots_t)
        object.__setattr__(self, "levels", levels_t)
        q = 1.0 / np.sqrt(np.asarray(levels_t, dtype=float))
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        """Number of jumps."""
        return len(self.knots)

    @property
    def q0(self) -> float:
        return float(self.q[0])

    @property
    def qn(self) -> float:
        return float(self.q[-1])

    def interval(self, k: int) -> Interval:
        """
        Get the interval I_k.

        Args:
            k: Interval index in [0, n]

        Returns:
            The interval (t_k, t_{k+1}] with infinite ends at the outside
        """
        if not 0 <= k <= self.n:
            raise ProfileIndexError(f"interval index {k} outside [0, {self.n}]")
        lo = -math.inf if k == 0 else self.knots[k - 1]
        hi = math.inf if k == self.n else self.knots[k]
        return Interval(lo, hi, lo_open=True, hi_open=math.isinf(hi))

    def p(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Evaluate the step function p."""
        idx = interval_index(self, x)
        values = np.asarray(self.levels)[idx]
        return float(values) if np.ndim(values) == 0 else values

    def cumulative_mu(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """
        Signed mu_p measure from the origin, M(x) = mu_p([0, x]) for x >= 0.

        M is continuous, piecewise linear and strictly increasing, so
        mu_p([a, b]) = M(b) - M(a).
        """
        xs = np.asarray(x, dtype=float)
        bps, vals = self._cumulative_breakpoints()
        out = np.interp(xs, bps, vals)
        # np.interp clamps outside the breakpoints; extend linearly with q_0 and q_n.
        out = np.where(xs < bps[0], vals[0] - self.q0 * (bps[0] - xs), out)
        out = np.where(xs > bps[-1], vals[-1] + self.qn * (xs - bps[-1]), out)
        return float(out) if out.ndim == 0 else out

    def inverse_cumulative_mu(self, m: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Inverse of cumulative_mu."""
        ms = np.asarray(m, dtype=float)
        bps, vals = self._cumulative_breakpoints()
        out = np.interp(ms, vals, bps)
        out = np.where(ms < vals[0], bps[0] - (vals[0] - ms) / self.q0, out)
        out = np.where(ms > vals[-1], bps[-1] + (ms - vals[-1]) / self.qn, out)
        return float(out) if out.ndim == 0 else out

    def _cumulative_breakpoints(self):
        bps = np.array(sorted(set(self.knots) | {0.0}), dtype=float)
        if bps.size == 1:
            bps = np.array([-1.0, 0.0, 1.0])
        vals = np.array([_signed_mu(self, 0.0, b) for b in bps])
        return bps, vals

    def mu_uniform_points(self, a: float, b: float, spacing: float) -> np.ndarray:
        """
        Points in [a, b] whose consecutive mu_p gaps all equal spacing.

        Args:
            a: Left end of the window
            b: Right end of the window
            spacing: Common mu_p gap

        Returns:
            Sorted array of points, symmetric in the mu_p coordinate around M(0)
        """
        if spacing <= 0:
            raise ValidationError("spacing must be positive", field="spacing")
        ma, mb = self.cumulative_mu(a), self.cumulative_mu(b)
        k_lo = math.ceil(ma / spacing - 1e-12)
        k_hi = math.floor(mb / spacing + 1e-12)
        grid = np.arange(k_lo, k_hi + 1, dtype=float) * spacing
        return np.asarray(self.inverse_cumulative_mu(grid), dtype=float)

    @classmethod
    def random(
        cls,
        n: int,
        rng: np.random.Generator,
        level_range: tuple = (0.1, 10.0),
        knot_range: tuple = (-10.0, 10.0),
        min_gap: float = 1e-3,
    ) -> "BandwidthProfile":
        """
        Draw a random profile with n jumps.

        Levels are log-uniform in level_range, knots uniform in knot_range.
        """
        lo, hi = math.log(level_range[0]), math.log(level_range[1])
        levels = np.exp(rng.uniform(lo, hi, size=n + 1))
        while True:
            knots = np.sort(rng.uniform(knot_range[0], knot_range[1], size=n))
            if n < 2 or np.min(np.diff(knots)) > min_gap:
                break
        return cls(knots.tolist(), levels.tolist())

    @classmethod
    def constant(cls, level: float = 1.0) -> "BandwidthProfile":
        return cls((), (level,))

    def to_dict(self) -> Dict[str, List[float]]:
        return {"knots": list(self.knots), "levels": list(self.levels)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BandwidthProfile":
        if not isinstance(data, dict):
            raise ValidationError("profile must be a JSON object", field="profile")
        missing = {"knots", "levels"} - set(data)
        if missing:
            raise ValidationError(f"missing keys {sorted(missing)}", field="profile")
        return cls(data["knots"], data["levels"])

    def to_json(self) -> str:
        # float repr is the shortest string that round-trips exactly.
        return json.dumps(self.to_dict())

    @classmethod
    def load_from_file(cls, path: Union[str, Path]) -> "BandwidthProfile":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ValidationError(f"line {e.lineno}: {e.msg}", field=str(path)) from e
        return cls.from_dict(data)

    def save_to_file(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")


def interval_index(profile: BandwidthProfile, x: Union[float, np.ndarray]) -> Union[int, np.ndarray]:
    """
    Index k of the interval I_k containing x.

    Args:
        profile: Bandwidth profile
        x: Finite point or array of points

    Returns:
        k in [0, n]; a knot t_k belongs to I_{k-1}
    """
    # side="left" counts knots strictly below x, which is the (t_k, t_{k+1}] convention.
    idx = np.searchsorted(np.asarray(profile.knots, dtype=float), x, side="left")
    if np.ndim(idx) == 0:
        return int(idx)
    return idx


def mu_p(profile: BandwidthProfile, a: float, b: float) -> float:
    """
    Measure mu_p([a, b]) = integral of p^(-1/2) over [a, b].

    Args:
        profile: Bandwidth profile
        a: Left end
        b: Right end, b >= a

    Returns:
        Sum over k of q_k times the overlap of [a, b] with I_k
    """
    if b < a:
        raise ValidationError(f"mu_p needs a <= b, got [{a}, {b}]", field="interval")
    return _signed_mu(profile, a, b)


def mu_p_many(profile: BandwidthProfile, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorized mu_p over arrays of interval ends."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    edges = np.concatenate(([-np.inf], np.asarray(profile.knots, dtype=float), [np.inf]))
    lo = np.maximum(a[..., None], edges[:-1])
    hi = np.minimum(b[..., None], edges[1:])
    return np.sum(profile.q * np.clip(hi - lo, 0.0, None), axis=-1)


def _signed_mu(profile: BandwidthProfile, a: float, b: float) -> float:
    if a == b:
        return 0.0
    if b < a:
        return -_signed_mu(profile, b, a)
    edges = [-math.inf, *profile.knots, math.inf]
    parts = []
    for k in range(profile.n + 1):
        overlap = min(b, edges[k + 1]) - max(a, edges[k])
        if overlap > 0:
            parts.append(float(profile.q[k]) * overlap)
    return math.fsum(parts)
