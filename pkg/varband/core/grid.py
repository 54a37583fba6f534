"""
Grid specifications of the form start:stop:num.
"""

from dataclasses import dataclass

import numpy as np

from varband.errors import ValidationError


@dataclass(frozen=True)
class GridSpec:
    """Evenly spaced grid with num points from start to stop inclusive."""

    start: float
    stop: float
    num: int

    def __post_init__(self) -> None:
        if self.num < 1:
            raise ValidationError(f"grid needs at least one point, got {self.num}", field="grid")
        if self.num > 1 and not self.stop > self.start:
            raise ValidationError(f"grid needs start < stop, got {self.start}:{self.stop}", field="grid")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"expected start:stop:num, got {text!r}", field="grid")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as e:
            raise ValidationError(f"cannot parse {text!r}: {e}", field="grid") from e

    @classmethod
    def symmetric(cls, radius: float, num: int) -> "GridSpec":
        return cls(-radius, radius, num)

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)

    def __str__(self) -> str:
        return f"{self.start:g}:{self.stop:g}:{self.num}"
