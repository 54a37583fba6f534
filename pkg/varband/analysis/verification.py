"""
Verification Suite
==================

Runs the exact identities and structural properties of one profile and
spectral set as named checks with tolerances.

Checks:
- Wronskian identities and the kappa chain at seeded u in (0, 20]
- SU(1,1) product structure of the L and R products
- L_k R_k = I and det L_k = q_k / q_{k-1}
- kappa realness and lower bound
- uniform bound on |Phi+-|
- kernel symmetry and Gram positive semidefiniteness
- series error bound honesty (two-jump profiles in series mode)
"""

import dataclasses
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from varband.core.appoly import APPoly
from varband.core.piecewise import BandwidthProfile
from varband.core.transfer import (
    Branch,
    ConnectionTable,
    build_L,
    build_R,
    connection_table,
    phi,
    su11_residuals,
    uniform_bound,
    wronskian_identities,
)
from varband.kernel.evaluator import KernelEvaluator
from varband.spectral import QuadratureJ, SeriesJ, SpectralSet

FAULTS = ("corrupt-table",)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class VerificationReport:
    checks: List[CheckResult]
    seed: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
        }


def corrupt_table(table: ConnectionTable) -> ConnectionTable:
    """Negative control: perturb a_0+ so that the identities break."""
    aplus = list(table.aplus)
    aplus[0] = aplus[0] + APPoly.constant(0.5)
    return dataclasses.replace(table, aplus=tuple(aplus))


def _check(name: str, value: float, tolerance: float, upper: bool = True) -> CheckResult:
    passed = bool(np.isfinite(value)) and (value <= tolerance if upper else value >= tolerance)
    return CheckResult(name=name, value=float(value), tolerance=float(tolerance), passed=passed)


def run_verification(
    profile: BandwidthProfile,
    spectral_set: SpectralSet,
    seed: int = 0,
    samples: int = 50,
    kernel_points: int = 40,
    fault: Optional[str] = None,
    evaluator: Optional[KernelEvaluator] = None,
) -> VerificationReport:
    """
    Run all checks for one configuration.

    Args:
        profile: Bandwidth profile
        spectral_set: Bounded spectral set
        seed: Seed for the sampled u, x and point sets
        samples: Number of sampled u values
        kernel_points: Size of the random point set for kernel checks
        fault: Optional fault to inject (corrupt-table)
        evaluator: Prebuilt evaluator for the kernel checks

    Returns:
        VerificationReport
    """
    rng = np.random.default_rng(seed)
    table = connection_table(profile)
    if fault == "corrupt-table":
        logger.warning("Injecting fault: corrupted connection table")
        table = corrupt_table(table)
    elif fault is not None:
        raise ValueError(f"unknown fault {fault!r}")

    checks: List[CheckResult] = []
    us = rng.uniform(0.0, 20.0, size=samples)
    us[us == 0.0] = 1e-3

    # Residuals are relative to the squared coefficient size at the same u.
    worst: Dict[str, float] = {}
    for u in us:
        scale = _coefficient_scale(table, u)
        for key, val in wronskian_identities(profile, table, u).residuals.items():
            worst[key] = max(worst.get(key, 0.0), val / scale)
        for key, val in su11_residuals(profile, table, u).items():
            worst[key] = max(worst.get(key, 0.0), val / scale)
    for key in sorted(worst):
        checks.append(_check(key, worst[key], 1e-9))

    inverse = 0.0
    det = 0.0
    for k in range(1, profile.n + 1):
        L, R = build_L(profile, k), build_R(profile, k)
        prod = L @ R
        inverse = max(inverse, float(np.max(np.abs(prod.evaluate(1.0) - np.eye(2)))))
        expected = float(profile.q[k] / profile.q[k - 1])
        det_poly = L.det()
        det = max(det, float(np.max(np.abs(det_poly(us) - expected))))
    checks.append(_check("transfer_inverse", inverse, 1e-12))
    checks.append(_check("transfer_det", det, 1e-12))

    kvals = np.abs(table.aplus[0](us)) ** 2 / profile.q0**2
    floor = float(np.min(kvals) - 1.0 / (profile.q0 * profile.qn))
    checks.append(_check("kappa_lower_bound", floor, -1e-12 * max(1.0, float(np.max(kvals))), upper=False))

    xs = rng.uniform(-15.0, 15.0, size=20)
    phi_excess = 0.0
    for u in us[:10]:
        for branch in Branch:
            phi_excess = max(phi_excess, float(np.max(np.abs(phi(profile, table, branch, u, xs)))) - uniform_bound(profile, branch))
    checks.append(_check("uniform_bound", phi_excess, 0.0))

    ev = evaluator if evaluator is not None else KernelEvaluator(profile, spectral_set)
    kgrid = ev.kappa.poly(np.linspace(0.0, 20.0, 401))
    imag = float(np.max(np.abs(np.imag(kgrid))))
    checks.append(_check("kappa_real", imag, 1e-12 * max(1.0, float(np.max(np.abs(kgrid))))))

    pts = np.sort(rng.uniform(-10.0, 10.0, size=kernel_points))
    G = ev.matrix(pts)
    checks.append(_check("kernel_symmetry", float(np.max(np.abs(G - G.T))), 1e-10))
    eig = np.linalg.eigvalsh(0.5 * (G + G.T))
    checks.append(_check("kernel_psd", float(eig[0] / max(eig[-1], 1e-300)), -1e-8, upper=False))

    if isinstance(ev.jev, SeriesJ):
        checks.append(_series_honesty(ev, rng))

    report = VerificationReport(checks=checks, seed=seed)
    logger.info(f"Verification: {len(checks)} checks, failed={report.failed}")
    return report


def _coefficient_scale(table: ConnectionTable, u: float) -> float:
    largest = max(float(np.max(np.abs(v))) for v in table.evaluate(u).values())
    return max(1.0, largest) ** 2


def _series_honesty(ev: KernelEvaluator, rng: np.random.Generator) -> CheckResult:
    jev: SeriesJ = ev.jev  # type: ignore[assignment]
    oracle = QuadratureJ(ev.kappa, ev.spectral_set)
    s = rng.uniform(-50.0, 50.0, size=50)
    reference = oracle(s)
    worst = -np.inf
    for order in range(jev.order + 1):
        excess = float(np.max(np.abs(jev.partial_sum(s, order) - reference))) - jev.error_bound(order) - 1e-10
        worst = max(worst, excess)
    return _check("series_bound", worst, 0.0)
