"""
Reproducing Kernel Evaluator
============================

This module coordinates the pieces needed to evaluate the reproducing
kernel k(x, y) of the variable-bandwidth Paley-Wiener space: the
connection table, kappa, a J evaluator and the per-block integrand
decompositions.

Responsibilities:
- Build and cache everything a kernel evaluation needs, eagerly
- Evaluate k on points, pairs and grids by the generic J assembly or by the
  two-jump closed form
- Evaluate the diagonal through its own formula
- Report decay constants and the diagonal lower bound
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from varband.config import settings
from varband.core.appoly import APPoly, ap_add, ap_conj, ap_modulus_squared, ap_mul
from varband.core.grid import GridSpec
from varband.core.piecewise import BandwidthProfile, interval_index
from varband.core.transfer import ConnectionTable, connection_table
from varband.errors import KernelAssemblyError, ValidationError
from varband.kernel.closed_n2 import one_jump_kernel, two_jump_kernel
from varband.kernel.theta import ThetaDecomposition, theta_decompose
from varband.spectral import JEvaluator, Kappa, QuadratureJ, SpectralSet, kappa_of, make_j_evaluator

ArrayLike = Union[float, np.ndarray]
KERNEL_MODES = ("auto", "generic", "closed_form_n2")


class KernelEvaluator:
    """
    Evaluator of the reproducing kernel for one profile and spectral set.

    Attributes:
        profile: Bandwidth profile
        spectral_set: Bounded spectral set
        table: Connection coefficients
        kappa: Spectral density
        jev: J evaluator
        mode: generic or closed_form_n2
        theta: Integrand decomposition per block (j, l)
        h1: Diagonal weight |a_j+|^2/q_0 + |a_j-|^2/q_n per interval
        h2: Diagonal weight conj(a_j+) b_j+/q_0 + conj(a_j-) b_j-/q_n per interval
    """

    def __init__(
        self,
        profile: BandwidthProfile,
        spectral_set: SpectralSet,
        j_mode: str = "auto",
        mode: str = "auto",
        eps: Optional[float] = None,
    ) -> None:
        """
        Build connection table, kappa, J evaluator and all caches.

        Args:
            profile: Bandwidth profile
            spectral_set: Bounded spectral set
            j_mode: J evaluator mode (auto, quadrature, series, elementary)
            mode: Kernel mode (auto, generic, closed_form_n2)
            eps: Series truncation target
        """
        if mode not in KERNEL_MODES:
            raise ValidationError(f"unknown kernel mode {mode!r}, expected one of {KERNEL_MODES}", field="mode")
        self.profile = profile
        self.spectral_set = spectral_set
        self.table: ConnectionTable = connection_table(profile)
        self.kappa: Kappa = kappa_of(profile, self.table)
        self.jev: JEvaluator = make_j_evaluator(self.kappa, spectral_set, profile, mode=j_mode, eps=eps)

        closed_possible = profile.n == 2 and spectral_set.is_band()
        if mode == "closed_form_n2" and not closed_possible:
            raise ValidationError("closed_form_n2 needs two jumps and Lambda = [0, Omega]", field="mode")
        if mode == "auto":
            mode = "closed_form_n2" if closed_possible else "generic"
        self.mode = mode

        n = profile.n
        self.theta: Dict[Tuple[int, int], ThetaDecomposition] = {
            (j, l): theta_decompose(profile, self.table, j, l) for j in range(n + 1) for l in range(n + 1)
        }
        self.h1: List[APPoly] = []
        self.h2: List[APPoly] = []
        w_plus, w_minus = 1.0 / profile.q0, 1.0 / profile.qn
        for j in range(n + 1):
            ap, bp, am, bm = self.table.aplus[j], self.table.bplus[j], self.table.aminus[j], self.table.bminus[j]
            self.h1.append(ap_add(ap_modulus_squared(ap).scale(w_plus), ap_modulus_squared(am).scale(w_minus)))
            self.h2.append(ap_add(ap_mul(ap_conj(ap), bp).scale(w_plus), ap_mul(ap_conj(am), bm).scale(w_minus)))

        logger.info(
            f"Kernel evaluator ready: n={n}, mode={self.mode}, J={self.jev.mode}, "
            f"|Lambda^1/2|={spectral_set.sqrt_measure:.6g}"
        )

    @property
    def sqrt_omega(self) -> float:
        omega = self.spectral_set.omega
        if omega is None:
            raise ValidationError("operation needs Lambda = [0, Omega]", field="spectrum")
        return math.sqrt(omega)

    def generic(self, x: ArrayLike, y: ArrayLike) -> Union[float, np.ndarray]:
        """
        Kernel by assembling sum alpha_k J(beta_k(x, y)) block by block.

        Args:
            x: First argument(s)
            y: Second argument(s), broadcast against x

        Returns:
            Real kernel values

        Raises:
            KernelAssemblyError: If an imaginary residue exceeds imag_tolerance
        """
        xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        jx = np.asarray(interval_index(self.profile, xb))
        jy = np.asarray(interval_index(self.profile, yb))
        out = np.zeros(xb.shape, dtype=complex)
        for (j, l), theta in self.theta.items():
            mask = (jx == j) & (jy == l)
            if not np.any(mask):
                continue
            xm, ym = xb[mask], yb[mask]
            acc = np.zeros(xm.shape, dtype=complex)
            for (sx, sy), poly in theta.groups.items():
                acc += self.jev.integrate(poly, sx * theta.qj * xm + sy * theta.ql * ym)
            out[mask] = acc
        return self._real(out)

    def closed_form(self, x: ArrayLike, y: ArrayLike) -> Union[float, np.ndarray]:
        """Kernel by the two-jump closed form."""
        return two_jump_kernel(self.profile, self.sqrt_omega, self.jev.real_part, x, y)

    def __call__(self, x: ArrayLike, y: ArrayLike) -> Union[float, np.ndarray]:
        if self.mode == "closed_form_n2":
            return self.closed_form(x, y)
        return self.generic(x, y)

    def matrix(self, xs: np.ndarray, ys: Optional[np.ndarray] = None) -> np.ndarray:
        """Matrix [k(x_i, y_j)]; ys defaults to xs."""
        xs = np.asarray(xs, dtype=float)
        ys = xs if ys is None else np.asarray(ys, dtype=float)
        return np.asarray(self(xs[:, None], ys[None, :]), dtype=float).reshape(xs.size, ys.size)

    def diagonal(self, y: ArrayLike) -> Union[float, np.ndarray]:
        """
        k(y, y) = 2 Re I(h1_j)(0) + 2 Re I(h2_j)(-2 q_j y) for y in I_j.

        Here I(h)(s) is the weighted J integral of h at shift s.
        """
        yb = np.asarray(y, dtype=float)
        jy = np.asarray(interval_index(self.profile, yb))
        out = np.zeros(yb.shape)
        for j in range(self.profile.n + 1):
            mask = jy == j
            if not np.any(mask):
                continue
            constant = 2.0 * np.real(self.jev.integrate(self.h1[j], 0.0))
            oscillating = 2.0 * np.real(self.jev.integrate(self.h2[j], -2.0 * float(self.profile.q[j]) * yb[mask]))
            out[mask] = constant + oscillating
        return float(out) if out.ndim == 0 else out

    def _real(self, values: np.ndarray) -> Union[float, np.ndarray]:
        if values.size:
            residue = float(np.max(np.abs(values.imag)))
            scale = max(1.0, float(np.max(np.abs(values.real))))
            if residue > settings.imag_tolerance * scale:
                raise KernelAssemblyError(f"kernel imaginary residue {residue:.3e}", residue=residue)
        real = values.real
        return float(real) if real.ndim == 0 else real

    def get_system_status(self) -> Dict[str, Any]:
        """
        Get information about the evaluator.

        Returns:
            Dictionary with profile, spectrum, modes and cache sizes
        """
        return {
            "profile": self.profile.to_dict(),
            "spectrum": self.spectral_set.to_dict(),
            "mode": self.mode,
            "j_evaluator": self.jev.get_evaluator_info(),
            "kappa": self.kappa.to_dict(),
            "theta_terms": sum(len(t.terms()) for t in self.theta.values()),
        }


def build_evaluator(
    profile: BandwidthProfile,
    spectral_set: SpectralSet,
    j_mode: str = "auto",
    mode: str = "auto",
    eps: Optional[float] = None,
) -> KernelEvaluator:
    """Create a KernelEvaluator."""
    return KernelEvaluator(profile, spectral_set, j_mode=j_mode, mode=mode, eps=eps)


def kernel_eval(ev: KernelEvaluator, x: ArrayLike, y: ArrayLike) -> Union[float, np.ndarray]:
    """
    Evaluate k(x, y) in the evaluator's mode.

    Args:
        ev: Kernel evaluator
        x: First argument(s)
        y: Second argument(s)

    Returns:
        Real kernel value(s)
    """
    return ev(x, y)


def kernel_closed_n2(ev: KernelEvaluator, x: ArrayLike, y: ArrayLike) -> Union[float, np.ndarray]:
    """Evaluate k(x, y) by the two-jump closed form."""
    if ev.profile.n != 2 or not ev.spectral_set.is_band():
        raise ValidationError("closed form needs two jumps and Lambda = [0, Omega]", field="profile")
    return ev.closed_form(x, y)


def kernel_one_jump(ev: KernelEvaluator, x: ArrayLike, y: ArrayLike) -> Union[float, np.ndarray]:
    """Evaluate k(x, y) by the one-jump closed form."""
    return one_jump_kernel(ev.profile, ev.sqrt_omega, x, y)


def kernel_diagonal(ev: KernelEvaluator, y: ArrayLike) -> Union[float, np.ndarray]:
    """Evaluate k(y, y) by the diagonal formula."""
    return ev.diagonal(y)


@dataclass(frozen=True)
class DecayReport:
    """
    Off-diagonal decay fit of |k(x, y)| (1 + |x - y|).

    Attributes:
        constant: Supremum over the grid
        band_edges: Edges of the |x - y| bands
        band_max: Supremum within each band
        growth: True when the outer half of the bands exceeds the inner half by more than 10 percent
    """

    constant: float
    band_edges: Tuple[float, ...]
    band_max: Tuple[float, ...]
    growth: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constant": self.constant,
            "band_edges": list(self.band_edges),
            "band_max": list(self.band_max),
            "growth": self.growth,
        }


def decay_fit(ev: KernelEvaluator, grid: GridSpec, bands: int = 8) -> Tuple[float, DecayReport]:
    """
    Fit C in |k(x, y)| <= C / (1 + |x - y|) on a square grid.

    Args:
        ev: Kernel evaluator on Lambda = [0, Omega]
        grid: Grid used for both x and y
        bands: Number of distance bands in the report

    Returns:
        The fitted constant and a DecayReport
    """
    if not ev.spectral_set.is_band():
        raise ValidationError("decay fit needs Lambda = [0, Omega]", field="spectrum")
    pts = grid.points()
    K = ev.matrix(pts)
    dist = np.abs(pts[:, None] - pts[None, :])
    weighted = np.abs(K) * (1.0 + dist)
    constant = float(np.max(weighted))

    edges = np.linspace(0.0, float(dist.max()) + 1e-12, bands + 1)
    band_max = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (dist >= lo) & (dist < hi)
        band_max.append(float(np.max(weighted[sel])) if np.any(sel) else 0.0)
    half = bands // 2
    growth = max(band_max[half:]) > 1.1 * max(band_max[:half])
    if growth:
        logger.warning(f"Kernel decay fit shows growth with |x - y| (C={constant:.6g})")
    report = DecayReport(constant, tuple(float(e) for e in edges), tuple(band_max), growth)
    return constant, report


def diagonal_lower_bound(ev: KernelEvaluator) -> float:
    """
    C_1 = min_j (1 / (2 pi q_0)) integral of (|a_j+| - |b_j+|)^2 / kappa du.

    The diagonal satisfies k(x, x) >= C_1 everywhere.
    """
    nodes, weights = QuadratureJ(ev.kappa, ev.spectral_set).rule(1.0)
    values = []
    for j in range(ev.profile.n + 1):
        gap = np.abs(ev.table.aplus[j](nodes)) - np.abs(ev.table.bplus[j](nodes))
        values.append(float(np.sum(weights * gap**2)) / ev.profile.q0)
    return min(values)
