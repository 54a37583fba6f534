"""
Spectral Sets
=============

Finite unions of disjoint bounded intervals Lambda in [0, inf) and their
square-root images.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from varband.errors import ValidationError


@dataclass(frozen=True)
class SpectralSet:
    """
    Bounded spectral set Lambda = union of [a_i, b_i].

    Attributes:
        intervals: Sorted disjoint pairs (a_i, b_i) with 0 <= a_i < b_i < inf
    """

    intervals: Tuple[Tuple[float, float], ...]

    def __init__(self, intervals: Sequence[Sequence[float]]) -> None:
        cleaned: List[Tuple[float, float]] = []
        for i, pair in enumerate(intervals):
            if len(pair) != 2:
                raise ValidationError("each interval needs two endpoints", field=f"intervals[{i}]")
            a, b = float(pair[0]), float(pair[1])
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValidationError("endpoints must be finite", field=f"intervals[{i}]")
            if a < 0 or not a < b:
                raise ValidationError(f"need 0 <= a < b, got [{a}, {b}]", field=f"intervals[{i}]")
            cleaned.append((a, b))
        if not cleaned:
            raise ValidationError("spectral set is empty", field="intervals")
        cleaned.sort()
        for i in range(1, len(cleaned)):
            if cleaned[i][0] <= cleaned[i - 1][1]:
                raise ValidationError("intervals must be disjoint", field=f"intervals[{i}]")
        object.__setattr__(self, "intervals", tuple(cleaned))

    @classmethod
    def band(cls, omega: float) -> "SpectralSet":
        """The single interval [0, omega]."""
        return cls([(0.0, omega)])

    @property
    def sqrt_image(self) -> Tuple[Tuple[float, float], ...]:
        return tuple((math.sqrt(a), math.sqrt(b)) for a, b in self.intervals)

    @property
    def sqrt_measure(self) -> float:
        """|Lambda^(1/2)|, the total length of the square-root image."""
        return math.fsum(b - a for a, b in self.sqrt_image)

    @property
    def critical_density(self) -> float:
        return self.sqrt_measure / math.pi

    @property
    def u_max(self) -> float:
        return self.sqrt_image[-1][1]

    @property
    def omega(self) -> Optional[float]:
        """Omega when Lambda = [0, Omega], otherwise None."""
        if len(self.intervals) == 1 and self.intervals[0][0] == 0.0:
            return self.intervals[0][1]
        return None

    def is_band(self) -> bool:
        return self.omega is not None

    def to_dict(self) -> Dict[str, List[List[float]]]:
        return {"intervals": [list(iv) for iv in self.intervals]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SpectralSet":
        if not isinstance(data, dict) or "intervals" not in data:
            raise ValidationError("spectrum must be an object with key 'intervals'", field="spectrum")
        return cls(data["intervals"])

    @classmethod
    def load_from_file(cls, path: Union[str, Path]) -> "SpectralSet":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ValidationError(f"line {e.lineno}: {e.msg}", field=str(path)) from e
        return cls.from_dict(data)
