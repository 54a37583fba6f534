"""
J by Quadrature
===============

Adaptive Gauss-Legendre evaluation of J on any bounded spectral set.

The integrand exp(isu)/kappa(u) is analytic on each interval of
Lambda^(1/2); panels are capped at pi / (4 (|s| + nu)), nu the largest
frequency of kappa, and then refined until the oscillating test integrand
is resolved. Rules are cached per power-of-two bucket of the largest
frequency requested, so a grid of shifts shares one node set.
"""

import math
from typing import Dict, Optional, Tuple, Union

import numpy as np
from loguru import logger

from varband.config import settings
from varband.core.appoly import APPoly
from varband.spectral.j_base import ArrayLike, JEvaluator
from varband.spectral.kappa import Kappa
from varband.spectral.quadrature import adaptive_rule
from varband.spectral.spectral_set import SpectralSet

CHUNK = 256


class QuadratureJ(JEvaluator):
    """J evaluator based on adaptive composite Gauss-Legendre rules."""

    mode = "quadrature"

    def __init__(
        self,
        kappa: Kappa,
        spectral_set: SpectralSet,
        tol: Optional[float] = None,
        order: Optional[int] = None,
        max_panels: Optional[int] = None,
    ) -> None:
        super().__init__(kappa, spectral_set)
        self.tol = tol if tol is not None else settings.quad_tolerance
        self.order = order if order is not None else settings.gl_order
        self.max_panels = max_panels if max_panels is not None else settings.quad_max_panels
        self._rules: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}

    def rule(self, frequency: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Nodes and J-weights w_i / (2 pi kappa(u_i)) resolving shifts up to frequency.

        Args:
            frequency: Largest |shift| the rule must resolve

        Returns:
            Nodes and weights over all of Lambda^(1/2)
        """
        bucket = max(0, math.ceil(math.log2(max(frequency, 1.0))))
        if bucket not in self._rules:
            omega = float(2**bucket)
            nu = self.kappa.max_frequency
            max_width = math.pi / (4.0 * (omega + nu))

            def test(u: np.ndarray) -> np.ndarray:
                return np.exp(1j * omega * u) / self.kappa(u)

            nodes, weights = [], []
            for a, b in self.spectral_set.sqrt_image:
                x, w = adaptive_rule(test, a, b, self.order, self.tol, max_width, self.max_panels)
                nodes.append(x)
                weights.append(w)
            x = np.concatenate(nodes)
            w = np.concatenate(weights) / (2.0 * math.pi * self.kappa(x))
            self._rules[bucket] = (x, w)
            logger.debug(f"Quadrature rule for frequency <= {omega:g}: {x.size} nodes")
        return self._rules[bucket]

    def integrate(self, g: APPoly, s: ArrayLike) -> Union[complex, np.ndarray]:
        s_arr = np.asarray(s, dtype=float)
        flat = s_arr.ravel()
        reach = (float(np.max(np.abs(flat))) if flat.size else 0.0) + g.max_frequency
        nodes, weights = self.rule(reach)
        gw = g(nodes) * weights

        out = np.empty(flat.shape, dtype=complex)
        for start in range(0, flat.size, CHUNK):
            block = flat[start : start + CHUNK]
            out[start : start + CHUNK] = np.exp(1j * np.multiply.outer(block, nodes)) @ gw
        out = out.reshape(s_arr.shape)
        return complex(out) if out.ndim == 0 else out


def j_quadrature(kappa: Kappa, spectral_set: SpectralSet, s: ArrayLike) -> Union[complex, np.ndarray]:
    """
    Evaluate J(s) by adaptive quadrature.

    Args:
        kappa: Spectral density
        spectral_set: Bounded spectral set
        s: Point or array of points

    Returns:
        J(s)
    """
    return QuadratureJ(kappa, spectral_set)(s)
