"""
J Function Interface
====================

This module defines the base interface for evaluators of

    J(s) = (1/2pi) * integral over Lambda^(1/2) of exp(isu) / kappa(u) du.

All J evaluators inherit from this base class. Besides J itself they
evaluate the weighted form

    (1/2pi) * integral of g(u) exp(isu) / kappa(u) du

for an almost periodic polynomial g = sum alpha_k exp(i beta_k u), which
equals sum alpha_k J(beta_k + s). Kernel assembly is built on that form.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Union

import numpy as np

from varband.core.appoly import APPoly
from varband.spectral.kappa import Kappa
from varband.spectral.spectral_set import SpectralSet

ArrayLike = Union[float, np.ndarray]


class JEvaluator(ABC):
    """
    Base class for J evaluators.

    Attributes:
        kappa: Spectral density
        spectral_set: Bounded spectral set Lambda
    """

    mode: str = "abstract"

    def __init__(self, kappa: Kappa, spectral_set: SpectralSet) -> None:
        self.kappa = kappa
        self.spectral_set = spectral_set

    @abstractmethod
    def integrate(self, g: APPoly, s: ArrayLike) -> Union[complex, np.ndarray]:
        """
        Weighted J integral.

        Args:
            g: Almost periodic weight
            s: Shift or array of shifts

        Returns:
            sum over terms of g of alpha_k J(beta_k + s)
        """
        pass

    def __call__(self, s: ArrayLike) -> Union[complex, np.ndarray]:
        """Evaluate J(s)."""
        return self.integrate(APPoly.constant(1.0), s)

    def real_part(self, s: ArrayLike) -> Union[float, np.ndarray]:
        """J_r(s) = Re J(s)."""
        value = np.real(self(s))
        return float(value) if np.ndim(value) == 0 else value

    def get_evaluator_info(self) -> Dict[str, Any]:
        """
        Get information about the evaluator.

        Returns:
            Dictionary with the mode and the spectral set
        """
        return {
            "mode": self.mode,
            "intervals": [list(iv) for iv in self.spectral_set.intervals],
            "kappa_terms": len(self.kappa.cosine_view.terms),
        }

    def _sum_terms(self, g: APPoly, s: ArrayLike, single) -> Union[complex, np.ndarray]:
        s_arr = np.asarray(s, dtype=float)
        out = np.zeros(s_arr.shape, dtype=complex)
        for beta, alpha in g.terms():
            out = out + alpha * single(s_arr + beta)
        return complex(out) if out.ndim == 0 else out
