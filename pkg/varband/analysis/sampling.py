"""
Empirical Frame-Bound Probes
============================

Finite-dimensional Gram-matrix experiments relating point sets to stable
sampling and interpolation.

Functions are modelled as f = sum c_i k(., y_i) over a dense mu_p-uniform
reference grid Y inside a window W. Then ||f||^2 = c^T G c with
G = [k(y_i, y_j)], and the samples of f on X are K_XY c. All results are
empirical estimates on a finite window; they do not certify sampling or
interpolation properties.

Features:
- Reference grid construction with configurable oversampling
- Generalized Rayleigh quotient bounds on the retained spectrum of G
- Interpolation Gram conditioning
- Seeded density sweeps over growing windows
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import eigh, eigvalsh

from varband.config import settings
from varband.errors import DomainError, RankDeficiencyError, ValidationError
from varband.analysis.density import PointSet
from varband.kernel.evaluator import KernelEvaluator


@dataclass(frozen=True)
class GramSystem:
    """
    Reference model of PW on a window.

    Attributes:
        Y: Reference grid
        G: Gram matrix [k(y_i, y_j)]
        threshold: Relative eigenvalue threshold applied to G
    """

    Y: np.ndarray
    G: np.ndarray
    threshold: float

    def retained(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Eigenpairs of G above threshold * lambda_max.

        Raises:
            RankDeficiencyError: If nothing is left
        """
        values, vectors = eigh(self.G)
        top = float(values[-1]) if values.size else 0.0
        keep = values > self.threshold * top if top > 0 else np.zeros(values.shape, dtype=bool)
        if not np.any(keep):
            raise RankDeficiencyError("Gram matrix is numerically rank zero after thresholding")
        return values[keep], vectors[:, keep]


def reference_grid(ev: KernelEvaluator, window: Tuple[float, float], oversampling: Optional[int] = None) -> np.ndarray:
    """
    mu_p-uniform grid with mu_p spacing pi / (oversampling |Lambda^(1/2)|).

    Args:
        ev: Kernel evaluator
        window: (lo, hi)
        oversampling: Oversampling factor; default settings.oversampling

    Returns:
        Sorted grid inside the window
    """
    factor = oversampling if oversampling is not None else settings.oversampling
    spacing = math.pi / (factor * ev.spectral_set.sqrt_measure)
    return ev.profile.mu_uniform_points(window[0], window[1], spacing)


def gram_system(ev: KernelEvaluator, Y: np.ndarray, threshold: Optional[float] = None) -> GramSystem:
    G = ev.matrix(Y)
    G = 0.5 * (G + G.T)
    return GramSystem(Y=np.asarray(Y, dtype=float), G=G, threshold=threshold if threshold is not None else settings.gram_threshold)


def empirical_frame_bounds(
    ev: KernelEvaluator,
    X: PointSet,
    window: Optional[Tuple[float, float]] = None,
    oversampling: Optional[int] = None,
    system: Optional[GramSystem] = None,
) -> Tuple[float, float]:
    """
    Estimate sampling bounds A, B with A ||f||^2 <= sum_x |f(x)|^2 <= B ||f||^2.

    Args:
        ev: Kernel evaluator
        X: Probe point set
        window: Reference window; default [-sampling_window, sampling_window]
        oversampling: Reference grid oversampling
        system: Precomputed reference system to reuse

    Returns:
        (A_hat, B_hat), extreme generalized Rayleigh quotients of (K_XY^T K_XY, G)
    """
    if system is None:
        w = window if window is not None else (-settings.sampling_window, settings.sampling_window)
        system = gram_system(ev, reference_grid(ev, w, oversampling))
    values, vectors = system.retained()
    if len(X) == 0:
        return 0.0, 0.0

    K_XY = ev.matrix(X.points, system.Y)
    # Whitened problem: D^{-1/2} V^T K^T K V D^{-1/2} on the retained subspace.
    B = (K_XY @ vectors) / np.sqrt(values)
    quotients = eigvalsh(B.T @ B)
    a_hat = max(0.0, float(quotients[0]))
    b_hat = max(a_hat, float(quotients[-1]))
    return a_hat, b_hat


def interpolation_conditioning(ev: KernelEvaluator, X: PointSet) -> Tuple[float, float, float]:
    """
    Extreme eigenvalues of the Gram matrix [k(x_i, x_j)].

    Args:
        ev: Kernel evaluator
        X: Distinct points

    Returns:
        (lambda_min, lambda_max, cond) with cond = lambda_max / lambda_min (inf when lambda_min <= 0)
    """
    if len(X) == 0:
        raise ValidationError("point set is empty", field="points")
    if X.has_duplicates():
        raise DomainError("interpolation conditioning needs distinct points")
    G = ev.matrix(X.points)
    values = eigvalsh(0.5 * (G + G.T))
    lam_min, lam_max = float(values[0]), float(values[-1])
    cond = lam_max / lam_min if lam_min > 0 else math.inf
    return lam_min, lam_max, cond


def probe_points(
    ev: KernelEvaluator,
    factor: float,
    window: Tuple[float, float],
    rng: np.random.Generator,
    jitter: float = 0.1,
) -> PointSet:
    """
    mu_p-uniform points at density factor * |Lambda^(1/2)| / pi with seeded jitter.

    Args:
        ev: Kernel evaluator
        factor: Density relative to the critical value
        window: Interval to fill
        rng: Random generator
        jitter: Jitter amplitude relative to the mu_p gap

    Returns:
        PointSet with support equal to the window
    """
    if not factor > 0:
        raise ValidationError("density factor must be positive", field="factor")
    gap = 1.0 / (factor * ev.spectral_set.critical_density)
    profile = ev.profile
    m_lo, m_hi = profile.cumulative_mu(window[0]), profile.cumulative_mu(window[1])
    k = np.arange(math.ceil(m_lo / gap), math.floor(m_hi / gap) + 1)
    m = (k + rng.uniform(-jitter, jitter, size=k.size)) * gap
    m = np.clip(m, m_lo, m_hi)
    return PointSet(profile.inverse_cumulative_mu(m), support=window)


@dataclass(frozen=True)
class SweepRow:
    factor: float
    window: float
    trial: int
    A_hat: float
    B_hat: float
    lambda_min: float
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def density_sweep(
    ev: KernelEvaluator,
    density_factors: Sequence[float],
    windows: Sequence[float],
    trials: int = 1,
    seed: Optional[int] = None,
    oversampling: Optional[int] = None,
    guard: Optional[float] = None,
) -> List[SweepRow]:
    """
    Frame bounds and interpolation conditioning over densities and windows.

    For every factor and half-width w a probe set is drawn on
    [-w - guard, w + guard] and tested against the reference model on
    [-w, w]; interpolation uses the probe points inside [-w, w].

    Args:
        ev: Kernel evaluator
        density_factors: Densities relative to the critical value
        windows: Increasing half-widths
        trials: Independent draws per configuration
        seed: Base seed; default settings.default_seed
        oversampling: Reference grid oversampling
        guard: Margin of the probe set outside the window

    Returns:
        Rows ordered by factor, window, trial
    """
    if any(f <= 0 for f in density_factors):
        raise ValidationError("density factors must be positive", field="factors")
    if trials < 1:
        raise ValidationError("trials must be at least 1", field="trials")
    seed = settings.default_seed if seed is None else int(seed)
    guard = settings.sampling_guard if guard is None else guard

    rows: List[SweepRow] = []
    for w_idx, w in enumerate(windows):
        system = gram_system(ev, reference_grid(ev, (-w, w), oversampling))
        for f_idx, factor in enumerate(density_factors):
            for trial in range(trials):
                rng = np.random.default_rng([seed, f_idx, w_idx, trial])
                X = probe_points(ev, factor, (-w - guard, w + guard), rng)
                a_hat, b_hat = empirical_frame_bounds(ev, X, system=system)
                inner = PointSet(X.points[(X.points >= -w) & (X.points <= w)], support=(-w, w))
                lam_min = interpolation_conditioning(ev, inner)[0] if len(inner) else 0.0
                rows.append(SweepRow(float(factor), float(w), trial, a_hat, b_hat, lam_min, seed))
                logger.debug(f"sweep factor={factor:g} w={w:g} trial={trial}: A={a_hat:.4g} B={b_hat:.4g} lmin={lam_min:.4g}")
    rows.sort(key=lambda r: (r.factor, r.window, r.trial))
    return rows
