"""
Kernel Integrand Decomposition
==============================

On a block I_j x I_l the kernel integrand

    theta(u, x, y) = conj(Phi+(x)) Phi+(y) / q_0 + conj(Phi-(x)) Phi-(y) / q_n

is a finite sum alpha_k exp(i beta_k u) whose frequencies are affine in x
and y: beta = offset + sx q_j x + sy q_l y with sx, sy in {-1, +1}. The
coefficients depend only on (j, l), so each block is stored as four
almost periodic polynomials in u, one per sign pattern.
"""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Tuple

import numpy as np

from varband.core.appoly import APPoly, ap_add, ap_conj, ap_mul
from varband.core.piecewise import BandwidthProfile
from varband.core.transfer import ConnectionTable
from varband.errors import ProfileIndexError

SIGNS = ((-1, 1), (-1, -1), (1, 1), (1, -1))


class ThetaTerm(NamedTuple):
    """One exponential alpha exp(i (offset + xcoef x + ycoef y) u)."""

    alpha: complex
    offset: float
    xcoef: float
    ycoef: float


@dataclass(frozen=True)
class ThetaDecomposition:
    """
    Integrand of one block grouped by sign pattern.

    Attributes:
        j: Interval index of x
        l: Interval index of y
        qj: Local scale q_j
        ql: Local scale q_l
        groups: (sx, sy) -> polynomial in u collecting all terms with
            frequency offset + sx q_j x + sy q_l y
    """

    j: int
    l: int
    qj: float
    ql: float
    groups: Dict[Tuple[int, int], APPoly]

    def shifts(self, x: np.ndarray, y: np.ndarray) -> Dict[Tuple[int, int], np.ndarray]:
        """The x, y dependent part of the frequency for each group."""
        return {(sx, sy): sx * self.qj * x + sy * self.ql * y for sx, sy in self.groups}

    def terms(self) -> List[ThetaTerm]:
        out = []
        for (sx, sy), poly in self.groups.items():
            for beta, alpha in poly.terms():
                out.append(ThetaTerm(alpha, beta, sx * self.qj, sy * self.ql))
        return out

    def evaluate(self, u: float, x: float, y: float) -> complex:
        return sum(
            complex(poly(u)) * np.exp(1j * u * (sx * self.qj * x + sy * self.ql * y))
            for (sx, sy), poly in self.groups.items()
        )


def theta_decompose(profile: BandwidthProfile, table: ConnectionTable, j: int, l: int) -> ThetaDecomposition:
    """
    Expand theta on I_j x I_l.

    Args:
        profile: Bandwidth profile
        table: Its connection table
        j: Interval of x
        l: Interval of y

    Returns:
        ThetaDecomposition with empty groups dropped
    """
    n = profile.n
    if not (0 <= j <= n and 0 <= l <= n):
        raise ProfileIndexError(f"block ({j}, {l}) outside [0, {n}]^2")
    w_plus, w_minus = 1.0 / profile.q0, 1.0 / profile.qn

    # conj(a e^{iwx} + b e^{-iwx}) gives sign -1 for a and +1 for b in x.
    left = {
        -1: (ap_conj(table.aplus[j]), ap_conj(table.aminus[j])),
        1: (ap_conj(table.bplus[j]), ap_conj(table.bminus[j])),
    }
    right = {
        1: (table.aplus[l], table.aminus[l]),
        -1: (table.bplus[l], table.bminus[l]),
    }

    groups: Dict[Tuple[int, int], APPoly] = {}
    for sx, sy in SIGNS:
        xp, xm = left[sx]
        yp, ym = right[sy]
        poly = ap_add(ap_mul(xp, yp).scale(w_plus), ap_mul(xm, ym).scale(w_minus))
        if not poly.is_zero():
            groups[(sx, sy)] = poly
    return ThetaDecomposition(j=j, l=l, qj=float(profile.q[j]), ql=float(profile.q[l]), groups=groups)
