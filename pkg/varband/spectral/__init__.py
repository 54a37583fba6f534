"""
Spectral Package
================

Spectral sets, the spectral density kappa and evaluators of the J function.
"""

from typing import Optional

from loguru import logger

from varband.config import settings
from varband.core.piecewise import BandwidthProfile
from varband.errors import ValidationError
from varband.spectral.j_base import JEvaluator
from varband.spectral.j_elementary import ElementaryJ
from varband.spectral.j_quadrature import QuadratureJ, j_quadrature
from varband.spectral.j_series import SeriesJ, TwoJumpConstants, j_series, jr_coefficients
from varband.spectral.kappa import Kappa, kappa_of, spectral_density_matrix, spectral_density_matrix_u
from varband.spectral.spectral_set import SpectralSet

MODES = ("auto", "quadrature", "series", "elementary")


def make_j_evaluator(
    kappa: Kappa,
    spectral_set: SpectralSet,
    profile: BandwidthProfile,
    mode: str = "auto",
    eps: Optional[float] = None,
) -> JEvaluator:
    """
    Create a J evaluator.

    In auto mode a constant kappa gets the elementary evaluator; a two-jump
    profile on Lambda = [0, Omega] with |R| <= series_max_ratio gets the
    series; everything else uses quadrature.

    Args:
        kappa: Spectral density
        spectral_set: Bounded spectral set
        profile: Bandwidth profile
        mode: One of auto, quadrature, series, elementary
        eps: Series truncation target

    Returns:
        Configured JEvaluator
    """
    if mode not in MODES:
        raise ValidationError(f"unknown J mode {mode!r}, expected one of {MODES}", field="mode")
    if mode == "auto":
        if kappa.is_constant():
            mode = "elementary"
        elif profile.n == 2 and spectral_set.is_band():
            ratio = abs(TwoJumpConstants.from_profile(profile).R)
            mode = "series" if ratio <= settings.series_max_ratio else "quadrature"
        else:
            mode = "quadrature"

    if mode == "elementary":
        jev: JEvaluator = ElementaryJ(kappa, spectral_set)
    elif mode == "series":
        jev = SeriesJ(kappa, spectral_set, profile, eps=eps)
    else:
        jev = QuadratureJ(kappa, spectral_set)
    logger.info(f"J evaluator: {jev.mode}")
    return jev


__all__ = [
    "ElementaryJ",
    "JEvaluator",
    "Kappa",
    "QuadratureJ",
    "SeriesJ",
    "SpectralSet",
    "TwoJumpConstants",
    "j_quadrature",
    "j_series",
    "jr_coefficients",
    "kappa_of",
    "make_j_evaluator",
    "spectral_density_matrix",
    "spectral_density_matrix_u",
]
