"""
J by Series (two jumps)
=======================

For a two-jump profile and Lambda = [0, Omega] the density is
kappa(u) = C + K cos(zeta u), so 1/kappa expands in a geometric series in
R = K / C and J becomes a sum of shifted sincs with an a-priori error bound.

Features:
- Constants C, K, zeta computed from q and the knot distance T, cross-checked
  against the symbolic kappa
- Smallest truncation order meeting a requested error, with the bound
- Arbitrary partial sums J_M for bound-honesty checks
- Coefficients c_k of the real part J_r as a sinc expansion
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy.special import gammaln

from varband.config import settings
from varband.core.appoly import APPoly
from varband.core.piecewise import BandwidthProfile
from varband.errors import KappaMismatchError, SeriesDivergenceError, ValidationError
from varband.spectral.j_base import ArrayLike, JEvaluator
from varband.spectral.kappa import Kappa
from varband.spectral.spectral_set import SpectralSet


@dataclass(frozen=True)
class TwoJumpConstants:
    """kappa(u) = C + K cos(zeta u) for a two-jump profile."""

    C: float
    K: float
    zeta: float

    @property
    def R(self) -> float:
        return self.K / self.C

    @classmethod
    def from_profile(cls, profile: BandwidthProfile) -> "TwoJumpConstants":
        if profile.n != 2:
            raise ValidationError(f"two-jump constants need n = 2, got n = {profile.n}", field="profile")
        q0, q1, q2 = (float(v) for v in profile.q)
        T = profile.knots[1] - profile.knots[0]
        C = ((1 + q0 / q1) ** 2 * (1 + q1 / q2) ** 2 + (1 - q0 / q1) ** 2 * (1 - q1 / q2) ** 2) / (16 * q0**2)
        K = (1 - q0**2 / q1**2) * (1 - q1**2 / q2**2) / (8 * q0**2)
        return cls(C=C, K=K, zeta=2 * q1 * T)

    def check_against(self, kappa: Kappa, tol: float = 1e-12) -> None:
        """
        Compare with the cosine view of the symbolic kappa.

        Raises:
            KappaMismatchError: On any disagreement beyond tol
        """
        view = kappa.cosine_view
        scale = max(abs(self.C), 1.0)
        if abs(view.c0 - self.C) > tol * scale:
            raise KappaMismatchError(f"constant term {view.c0!r} differs from C = {self.C!r}")
        significant = [(c, lam) for c, lam in view.terms if abs(c) > tol * scale]
        if abs(self.K) <= tol * scale:
            if significant:
                raise KappaMismatchError("kappa has cosine terms although K vanishes")
            return
        if len(significant) != 1:
            raise KappaMismatchError(f"expected one cosine term, found {len(significant)}")
        c, lam = significant[0]
        if abs(c - self.K) > tol * scale or abs(lam - abs(self.zeta)) > tol * max(abs(self.zeta), 1.0):
            raise KappaMismatchError(f"cosine term ({c!r}, {lam!r}) differs from K={self.K!r}, zeta={self.zeta!r}")


def _log_binomial(m: np.ndarray, l: np.ndarray) -> np.ndarray:
    return gammaln(m + 1.0) - gammaln(l + 1.0) - gammaln(m - l + 1.0)


class SeriesJ(JEvaluator):
    """
    Series evaluator for two jumps and Lambda = [0, Omega].

    Attributes:
        constants: C, K, zeta of kappa
        eps: Truncation error target
        order: Truncation order M meeting eps
        bound: A-priori error of the order-M partial sum
    """

    mode = "series"

    def __init__(
        self,
        kappa: Kappa,
        spectral_set: SpectralSet,
        profile: BandwidthProfile,
        eps: Optional[float] = None,
    ) -> None:
        super().__init__(kappa, spectral_set)
        if not spectral_set.is_band():
            raise ValidationError("series mode needs Lambda = [0, Omega]", field="spectrum")
        self.constants = TwoJumpConstants.from_profile(profile)
        self.constants.check_against(kappa)
        if abs(self.constants.R) >= 1.0:
            raise SeriesDivergenceError(f"series ratio |R| = {abs(self.constants.R):.6g} is not below 1")
        self.sqrt_omega = math.sqrt(spectral_set.omega)
        self.prefactor = self.sqrt_omega / (2.0 * self.constants.C * math.pi)
        self.eps = eps if eps is not None else settings.series_eps
        self.order = self.order_for(self.eps)
        self.bound = self.error_bound(self.order)
        self._shifts, self._weights = self._regrouped(self.order)
        logger.debug(f"Series J: R={self.constants.R:.6g}, M={self.order}, bound={self.bound:.3e}")

    def error_bound(self, order: int) -> float:
        """sup_s |J(s) - J_M(s)| <= prefactor |R|^(M+1) / (1 - |R|)."""
        r = abs(self.constants.R)
        return self.prefactor * r ** (order + 1) / (1.0 - r)

    def order_for(self, eps: float) -> int:
        """Smallest M whose error bound is at most eps."""
        if eps <= 0:
            raise ValidationError("eps must be positive", field="eps")
        r = abs(self.constants.R)
        if r == 0.0:
            return 0
        guess = math.log(eps * (1.0 - r) / self.prefactor) / math.log(r) - 1.0
        order = max(0, math.ceil(guess) - 1)
        while self.error_bound(order) > eps:
            order += 1
        while order > 0 and self.error_bound(order - 1) <= eps:
            order -= 1
        return order

    def _regrouped(self, order: int) -> Tuple[np.ndarray, np.ndarray]:
        # Collect (-R/2)^m binom(m, l) exp(i (m - 2l) zeta u) by k = m - 2l.
        R = self.constants.R
        ks = np.arange(-order, order + 1)
        weights = np.zeros(ks.size)
        if R == 0.0:
            weights[order] = self.prefactor
            return ks * self.constants.zeta, weights
        log_half = math.log(abs(R) / 2.0)
        sign = -1.0 if R > 0 else 1.0
        for m in range(order + 1):
            l = np.arange(m + 1)
            k = m - 2 * l
            mag = np.exp(_log_binomial(np.full(l.shape, float(m)), l.astype(float)) + m * log_half)
            np.add.at(weights, k + order, sign**m * mag)
        return ks * self.constants.zeta, self.prefactor * weights

    def partial_sum(self, s: ArrayLike, order: int) -> Union[complex, np.ndarray]:
        """The order-M partial sum J_M(s)."""
        shifts, weights = self._regrouped(order) if order != self.order else (self._shifts, self._weights)
        return self._evaluate(np.asarray(s, dtype=float), shifts, weights)

    def _evaluate(self, s: np.ndarray, shifts: np.ndarray, weights: np.ndarray) -> Union[complex, np.ndarray]:
        half = 0.5 * self.sqrt_omega
        sigma = np.add.outer(s, shifts) * half
        out = (np.exp(1j * sigma) * np.sinc(sigma / math.pi)) @ weights
        return complex(out) if np.ndim(out) == 0 else out

    def integrate(self, g: APPoly, s: ArrayLike) -> Union[complex, np.ndarray]:
        return self._sum_terms(g, s, lambda x: self._evaluate(x, self._shifts, self._weights))

    def jr_coefficients(self, kmax: int, rtol: float = 1e-14) -> np.ndarray:
        """
        Coefficients c_k, k = -kmax..kmax, of J_r(s) = sum c_k sinc(sqrt(Omega)(s - k zeta)).

        Args:
            kmax: Largest |k|
            rtol: Relative size of the first neglected term of each series

        Returns:
            Array of length 2 kmax + 1, symmetric in k
        """
        R = self.constants.R
        out = np.zeros(2 * kmax + 1)
        if R == 0.0:
            out[kmax] = self.prefactor
            return out
        log_half = math.log(abs(R) / 2.0)
        sign = -1.0 if R > 0 else 1.0
        for k in range(kmax + 1):
            total, j = 0.0, 0
            while True:
                m = 2 * j + k
                term = math.exp(float(_log_binomial(np.float64(m), np.float64(j))) + m * log_half)
                total += term
                if term <= rtol * total:
                    break
                j += 1
            out[kmax + k] = out[kmax - k] = self.prefactor * sign**k * total
        return out

    def get_evaluator_info(self) -> Dict[str, Any]:
        info = super().get_evaluator_info()
        info.update(
            C=self.constants.C,
            K=self.constants.K,
            zeta=self.constants.zeta,
            R=self.constants.R,
            order=self.order,
            bound=self.bound,
        )
        return info


def j_series(jev: SeriesJ, s: ArrayLike, eps: float) -> Tuple[Union[complex, np.ndarray], int, float]:
    """
    Evaluate J(s) by the truncated series.

    Args:
        jev: Series evaluator
        s: Point or array of points
        eps: Truncation error target

    Returns:
        Value, truncation order used and its error bound
    """
    order = jev.order_for(eps)
    return jev.partial_sum(s, order), order, jev.error_bound(order)


def jr_coefficients(jev: SeriesJ, kmax: int) -> np.ndarray:
    """Coefficients c_-kmax..c_kmax of the sinc expansion of J_r."""
    return jev.jr_coefficients(kmax)
