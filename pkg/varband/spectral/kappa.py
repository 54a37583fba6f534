"""
Spectral Density
================

The scalar density kappa(u) = |a_0+(u^2)|^2 / q_0^2 and the 2x2 spectral
measure density built from it.

Features:
- Symbolic kappa with cosine-basis view and lower bound 1/(q_0 q_n)
- Cross-check against the independent form |b_n-|^2 / q_n^2
- Density of the spectral measure in the lambda and in the u variable
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Union

import numpy as np
from loguru import logger

from varband.core.appoly import APPoly, CosineView, ap_modulus_squared
from varband.core.piecewise import BandwidthProfile
from varband.core.transfer import ConnectionTable
from varband.errors import DomainError, KappaMismatchError

CHECK_GRID = np.linspace(0.01, 20.0, 400)


@dataclass(frozen=True)
class Kappa:
    """
    Spectral density kappa as an almost periodic polynomial.

    Attributes:
        poly: Hermitian polynomial, real-valued on the real line
        cosine_view: c_0 + sum c_j cos(lambda_j u)
        lower_bound: 1 / (q_0 q_n)
    """

    poly: APPoly
    cosine_view: CosineView
    lower_bound: float

    def __call__(self, u: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        value = np.real(self.poly(u))
        return float(value) if np.ndim(value) == 0 else value

    @property
    def max_frequency(self) -> float:
        return self.poly.max_frequency

    def is_constant(self) -> bool:
        return len(self.cosine_view.terms) == 0

    def to_dict(self) -> Dict[str, Any]:
        return {**self.cosine_view.to_dict(), "lower_bound": self.lower_bound}


def kappa_of(profile: BandwidthProfile, table: ConnectionTable, rtol: float = 1e-11) -> Kappa:
    """
    Build kappa from the connection table.

    Args:
        profile: Bandwidth profile
        table: Its connection table
        rtol: Relative agreement required between the two constructions

    Returns:
        Kappa

    Raises:
        KappaMismatchError: If |a_0+|^2/q_0^2 and |b_n-|^2/q_n^2 disagree
    """
    q0, qn = profile.q0, profile.qn
    poly = ap_modulus_squared(table.aplus[0]).scale(1.0 / q0**2)
    other = ap_modulus_squared(table.bminus[-1]).scale(1.0 / qn**2)

    v1, v2 = np.real(poly(CHECK_GRID)), np.real(other(CHECK_GRID))
    worst = float(np.max(np.abs(v1 - v2) / np.maximum(np.abs(v1), 1e-300)))
    if worst > rtol:
        raise KappaMismatchError(f"kappa constructions disagree by {worst:.3e} (relative)", residual=worst)

    kappa = Kappa(poly=poly, cosine_view=poly.cosine_view(), lower_bound=1.0 / (q0 * qn))
    logger.debug(f"kappa has {len(kappa.cosine_view.terms)} cosine terms, c0={kappa.cosine_view.c0:.12g}")
    return kappa


def spectral_density_matrix(kappa: Kappa, profile: BandwidthProfile, lam: float) -> np.ndarray:
    """
    Density of the spectral measure with respect to d(lambda).

    Args:
        kappa: Spectral density
        profile: Bandwidth profile
        lam: Spectral parameter, lam > 0

    Returns:
        diag(1/q_0, 1/q_n) / (4 pi kappa(sqrt(lam)) sqrt(lam))
    """
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    root = math.sqrt(lam)
    factor = 1.0 / (4.0 * math.pi * kappa(root) * root)
    return np.diag([factor / profile.q0, factor / profile.qn])


def spectral_density_matrix_u(kappa: Kappa, profile: BandwidthProfile, u: float) -> np.ndarray:
    """
    Density of the same measure after lambda = u^2, with respect to du.

    Returns:
        diag(1/q_0, 1/q_n) / (2 pi kappa(u))
    """
    if not u > 0:
        raise DomainError(f"spectral variable must be positive, got u={u}")
    factor = 1.0 / (2.0 * math.pi * kappa(u))
    return np.diag([factor / profile.q0, factor / profile.qn])
