"""
J for Constant Density
======================

When kappa is constant (no jump, one jump, or jumps that cancel) J is an
elementary sum of sincs over the intervals of Lambda^(1/2).
"""

import math
from typing import Union

import numpy as np

from varband.core.appoly import APPoly
from varband.errors import ValidationError
from varband.spectral.j_base import ArrayLike, JEvaluator
from varband.spectral.kappa import Kappa
from varband.spectral.spectral_set import SpectralSet


class ElementaryJ(JEvaluator):
    """Closed-form J for constant kappa."""

    mode = "elementary"

    def __init__(self, kappa: Kappa, spectral_set: SpectralSet) -> None:
        if not kappa.is_constant():
            raise ValidationError("elementary J needs a constant kappa", field="mode")
        super().__init__(kappa, spectral_set)
        self.kappa0 = kappa.cosine_view.c0
        image = np.asarray(spectral_set.sqrt_image, dtype=float)
        self._centers = 0.5 * (image[:, 0] + image[:, 1])
        self._lengths = image[:, 1] - image[:, 0]

    def _single(self, s: np.ndarray) -> np.ndarray:
        half = 0.5 * np.multiply.outer(s, self._lengths)
        terms = self._lengths * np.exp(1j * np.multiply.outer(s, self._centers)) * np.sinc(half / math.pi)
        return terms.sum(axis=-1) / (2.0 * math.pi * self.kappa0)

    def integrate(self, g: APPoly, s: ArrayLike) -> Union[complex, np.ndarray]:
        return self._sum_terms(g, s, self._single)
