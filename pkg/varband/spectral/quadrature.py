"""
Adaptive Gauss-Legendre Rules
=============================

Composite Gauss-Legendre rules refined panel by panel until a test
integrand is resolved.
"""

from functools import lru_cache
from typing import Callable, List, Tuple

import numpy as np

from varband.errors import QuadratureError


@lru_cache(maxsize=8)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_rule(edges: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite rule on consecutive panels.

    Args:
        edges: Increasing panel boundaries
        order: Nodes per panel

    Returns:
        Flattened nodes and weights
    """
    x, w = gauss_legendre(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi) * 0.5 + half * x
    weights = half * w
    return nodes.ravel(), weights.ravel()


def adaptive_rule(
    integrand: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    order: int,
    tol: float,
    max_width: float,
    max_panels: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Build a composite rule on [a, b] that resolves a test integrand.

    Panels no wider than max_width are bisected level by level until the
    one-panel and two-half-panel estimates differ by at most
    tol * width / (b - a).

    Args:
        integrand: Vectorized test function of u
        a: Left end
        b: Right end
        order: Gauss-Legendre nodes per panel
        tol: Absolute tolerance over the whole interval
        max_width: Largest allowed panel width
        max_panels: Panel budget

    Returns:
        Nodes and weights of the accepted panels (each split in two halves)

    Raises:
        QuadratureError: If the panel budget is exhausted
    """
    length = b - a
    count = max(1, int(np.ceil(length / max_width)))
    pending = np.linspace(a, b, count + 1)
    pending = np.stack((pending[:-1], pending[1:]), axis=1)
    accepted: List[np.ndarray] = []
    worst = np.inf

    while pending.size:
        if len(pending) + sum(len(p) for p in accepted) > max_panels:
            raise QuadratureError(
                f"panel budget {max_panels} exceeded on [{a}, {b}]",
                achieved=float(worst),
                panels=len(pending),
            )
        lo, hi = pending[:, 0], pending[:, 1]
        mid = 0.5 * (lo + hi)
        coarse = _panel_sums(integrand, lo, hi, order)
        fine = _panel_sums(integrand, lo, mid, order) + _panel_sums(integrand, mid, hi, order)
        diff = np.abs(coarse - fine)
        ok = diff <= tol * (hi - lo) / length
        worst = float(np.max(diff)) if diff.size else 0.0

        done = pending[ok]
        if done.size:
            m = 0.5 * (done[:, 0] + done[:, 1])
            accepted.append(np.stack((done[:, 0], m), axis=1))
            accepted.append(np.stack((m, done[:, 1]), axis=1))
        bad = pending[~ok]
        bm = 0.5 * (bad[:, 0] + bad[:, 1])
        pending = np.concatenate((np.stack((bad[:, 0], bm), axis=1), np.stack((bm, bad[:, 1]), axis=1)))

    panels = np.concatenate(accepted)
    panels = panels[np.argsort(panels[:, 0])]
    edges = np.append(panels[:, 0], panels[-1, 1])
    return panel_rule(edges, order)


def _panel_sums(integrand: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray, order: int) -> np.ndarray:
    x, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)[:, None]
    nodes = 0.5 * (lo + hi)[:, None] + half * x
    return np.sum(integrand(nodes) * w * half, axis=1)
