"""
Transfer Matrices and Fundamental Solutions
===========================================

Builds the fundamental system Phi = (Phi+, Phi-) of -(p f')' = u^2 f for a
piecewise-constant profile by gluing local exponentials exp(+-i q_k u x)
across the knots with 2x2 transfer matrices whose entries are almost
periodic polynomials in u.

Phi+ equals exp(i q_n u x) on I_n and Phi- equals exp(-i q_0 u x) on I_0;
on every interval I_k both are a_k exp(i q_k u x) + b_k exp(-i q_k u x).

Features:
- Symbolic L_k / R_k matrices and their products
- Connection table a_k+-, b_k+- built by the right-to-left R product and the
  left-to-right L product
- Pointwise evaluation of Phi+- and its first two x-derivatives
- Residual reports for the Wronskian identities and the SU(1,1) products
- Per-branch uniform bound on |Phi+-|
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple, Union

import numpy as np
from loguru import logger

from varband.core.appoly import APPoly, ap_add, ap_conj, ap_mul
from varband.core.piecewise import BandwidthProfile, interval_index
from varband.errors import DomainError, ProfileIndexError


class Branch(str, Enum):
    """Which member of the fundamental system."""

    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 matrix of almost periodic polynomials in u."""

    a11: APPoly
    a12: APPoly
    a21: APPoly
    a22: APPoly

    @classmethod
    def identity(cls) -> "TransferMatrix":
        one, zero = APPoly.constant(1.0), APPoly.zero()
        return cls(one, zero, zero, one)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            ap_add(ap_mul(self.a11, other.a11), ap_mul(self.a12, other.a21)),
            ap_add(ap_mul(self.a11, other.a12), ap_mul(self.a12, other.a22)),
            ap_add(ap_mul(self.a21, other.a11), ap_mul(self.a22, other.a21)),
            ap_add(ap_mul(self.a21, other.a12), ap_mul(self.a22, other.a22)),
        )

    def apply(self, a: APPoly, b: APPoly) -> Tuple[APPoly, APPoly]:
        """Multiply the column vector [a; b]."""
        return (
            ap_add(ap_mul(self.a11, a), ap_mul(self.a12, b)),
            ap_add(ap_mul(self.a21, a), ap_mul(self.a22, b)),
        )

    def det(self) -> APPoly:
        return ap_add(ap_mul(self.a11, self.a22), -ap_mul(self.a12, self.a21))

    def evaluate(self, u: float) -> np.ndarray:
        return np.array([[self.a11(u), self.a12(u)], [self.a21(u), self.a22(u)]], dtype=complex)

    def entries(self) -> List[APPoly]:
        return [self.a11, self.a12, self.a21, self.a22]


def _jump_data(profile: BandwidthProfile, k: int) -> Tuple[float, float, float, float]:
    if not 1 <= k <= profile.n:
        raise ProfileIndexError(f"transfer matrix index {k} outside [1, {profile.n}]")
    t = profile.knots[k - 1]
    q_prev, q_k = float(profile.q[k - 1]), float(profile.q[k])
    eta = t * (q_prev - q_k)
    theta = t * (q_prev + q_k)
    return q_prev, q_k, eta, theta


def build_L(profile: BandwidthProfile, k: int) -> TransferMatrix:
    """
    Transfer matrix carrying [a_{k-1}; b_{k-1}] to [a_k; b_k] across t_k.

    Args:
        profile: Bandwidth profile
        k: Knot index, 1 <= k <= n

    Returns:
        L_k with det L_k = q_k / q_{k-1}
    """
    q_prev, q_k, eta, theta = _jump_data(profile, k)
    r = q_k / q_prev
    return TransferMatrix(
        APPoly.exp(eta, 0.5 * (1.0 + r)),
        APPoly.exp(-theta, 0.5 * (1.0 - r)),
        APPoly.exp(theta, 0.5 * (1.0 - r)),
        APPoly.exp(-eta, 0.5 * (1.0 + r)),
    )


def build_R(profile: BandwidthProfile, k: int) -> TransferMatrix:
    """
    Inverse of L_k, written out directly.

    Args:
        profile: Bandwidth profile
        k: Knot index, 1 <= k <= n

    Returns:
        R_k with det R_k = q_{k-1} / q_k
    """
    q_prev, q_k, eta, theta = _jump_data(profile, k)
    s = q_prev / q_k
    return TransferMatrix(
        APPoly.exp(-eta, 0.5 * (1.0 + s)),
        APPoly.exp(-theta, 0.5 * (1.0 - s)),
        APPoly.exp(theta, 0.5 * (1.0 - s)),
        APPoly.exp(eta, 0.5 * (1.0 + s)),
    )


@dataclass(frozen=True)
class ConnectionTable:
    """
    Connection coefficients of Phi+ and Phi- on every interval I_0, ..., I_n.

    Attributes:
        aplus: a_k+ for k = 0..n
        bplus: b_k+ for k = 0..n
        aminus: a_k- for k = 0..n
        bminus: b_k- for k = 0..n
    """

    aplus: Tuple[APPoly, ...]
    bplus: Tuple[APPoly, ...]
    aminus: Tuple[APPoly, ...]
    bminus: Tuple[APPoly, ...]

    @property
    def n(self) -> int:
        return len(self.aplus) - 1

    def coefficients(self, branch: Union[Branch, str]) -> Tuple[Tuple[APPoly, ...], Tuple[APPoly, ...]]:
        if Branch(branch) is Branch.PLUS:
            return self.aplus, self.bplus
        return self.aminus, self.bminus

    def evaluate(self, u: float) -> Dict[str, np.ndarray]:
        """
        Evaluate all coefficients at one u.

        Returns:
            Arrays of length n + 1 keyed by aplus, bplus, aminus, bminus
        """
        return {
            name: np.array([poly(u) for poly in getattr(self, name)], dtype=complex)
            for name in ("aplus", "bplus", "aminus", "bminus")
        }

    def max_frequency(self) -> float:
        return max(p.max_frequency for p in (*self.aplus, *self.bplus, *self.aminus, *self.bminus))

    def to_dict(self) -> Dict[str, List[List[Dict[str, float]]]]:
        return {name: [p.to_list() for p in getattr(self, name)] for name in ("aplus", "bplus", "aminus", "bminus")}


def connection_table(profile: BandwidthProfile) -> ConnectionTable:
    """
    Compute all connection coefficients symbolically.

    Args:
        profile: Bandwidth profile

    Returns:
        ConnectionTable with a_n+ = 1, b_n+ = 0, a_0- = 0, b_0- = 1
    """
    n = profile.n
    one, zero = APPoly.constant(1.0), APPoly.zero()

    aplus: List[APPoly] = [zero] * (n + 1)
    bplus: List[APPoly] = [zero] * (n + 1)
    aplus[n], bplus[n] = one, zero
    for l in range(n - 1, -1, -1):
        aplus[l], bplus[l] = build_R(profile, l + 1).apply(aplus[l + 1], bplus[l + 1])

    aminus: List[APPoly] = [zero] * (n + 1)
    bminus: List[APPoly] = [zero] * (n + 1)
    aminus[0], bminus[0] = zero, one
    for j in range(1, n + 1):
        aminus[j], bminus[j] = build_L(profile, j).apply(aminus[j - 1], bminus[j - 1])

    table = ConnectionTable(tuple(aplus), tuple(bplus), tuple(aminus), tuple(bminus))
    logger.debug(f"Connection table for n={n}: a_0+ has {len(table.aplus[0])} terms")
    return table


def phi_local(
    profile: BandwidthProfile,
    table: ConnectionTable,
    branch: Union[Branch, str],
    k: int,
    u: float,
    x: Union[float, np.ndarray],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Local exponential form of Phi on interval k, continued to any x.

    Args:
        profile: Bandwidth profile
        table: Connection table of the profile
        branch: '+' or '-'
        k: Interval whose coefficients are used
        u: Spectral variable, u > 0
        x: Point or array of points

    Returns:
        Value, first and second x-derivative
    """
    if not u > 0:
        raise DomainError(f"spectral variable must be positive, got u={u}")
    a_coefs, b_coefs = table.coefficients(branch)
    a, b = a_coefs[k](u), b_coefs[k](u)
    w = float(profile.q[k]) * u
    x = np.asarray(x, dtype=float)
    ep, em = np.exp(1j * w * x), np.exp(-1j * w * x)
    value = a * ep + b * em
    first = 1j * w * (a * ep - b * em)
    second = -(w**2) * value
    return value, first, second


def phi(
    profile: BandwidthProfile,
    table: ConnectionTable,
    branch: Union[Branch, str],
    u: float,
    x: Union[float, np.ndarray],
) -> Union[complex, np.ndarray]:
    """
    Evaluate Phi+ or Phi- at (u^2, x).

    Args:
        profile: Bandwidth profile
        table: Connection table of the profile
        branch: '+' or '-'
        u: Spectral variable, u > 0
        x: Point or array of points

    Returns:
        Complex value(s) of the fundamental solution
    """
    if not u > 0:
        raise DomainError(f"spectral variable must be positive, got u={u}")
    a_coefs, b_coefs = table.coefficients(branch)
    a = np.array([p(u) for p in a_coefs], dtype=complex)
    b = np.array([p(u) for p in b_coefs], dtype=complex)
    xs = np.asarray(x, dtype=float)
    k = np.asarray(interval_index(profile, xs))
    w = profile.q[k] * u
    out = a[k] * np.exp(1j * w * xs) + b[k] * np.exp(-1j * w * xs)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class IdentityReport:
    """Absolute residuals of the exact identities at one u."""

    u: float
    residuals: Dict[str, float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    def to_dict(self) -> Dict[str, float]:
        return {"u": self.u, **self.residuals}


def wronskian_identities(profile: BandwidthProfile, table: ConnectionTable, u: float) -> IdentityReport:
    """
    Residuals of the Wronskian identities at lambda = u^2.

    Args:
        profile: Bandwidth profile
        table: Connection table of the profile
        u: Spectral variable, u > 0

    Returns:
        IdentityReport with keys wron1, id1, hidentity, wron3, kappa_chain
    """
    if not u > 0:
        raise DomainError(f"spectral variable must be positive, got u={u}")
    c = table.evaluate(u)
    ap, bp, am, bm = c["aplus"], c["bplus"], c["aminus"], c["bminus"]
    q = profile.q
    q0, qn = profile.q0, profile.qn

    ref1 = ap[0] / q0
    wron1 = np.append((ap * bm - am * bp) / q, bm[-1] / qn)
    id1 = np.concatenate((q0 * (np.abs(bm) ** 2 - np.abs(am) ** 2) - q, qn * (np.abs(ap) ** 2 - np.abs(bp) ** 2) - q))
    hid = (np.abs(ap) ** 2 / q0 + np.abs(am) ** 2 / qn) - (np.abs(bp) ** 2 / q0 + np.abs(bm) ** 2 / qn)
    ref3 = bp[0] / q0
    wron3 = np.append((bp * np.conj(bm) - ap * np.conj(am)) / q, -np.conj(am[-1]) / qn)

    chain = np.array(
        [
            abs(ap[0]) ** 2 / q0**2,
            abs(bp[0]) ** 2 / q0**2 + 1.0 / (q0 * qn),
            abs(bm[-1]) ** 2 / qn**2,
            1.0 / (q0 * qn) + abs(am[-1]) ** 2 / qn**2,
        ]
    )

    residuals = {
        "wron1": float(np.max(np.abs(wron1 - ref1))),
        "id1": float(np.max(np.abs(id1))),
        "hidentity": float(np.max(np.abs(hid))),
        "wron3": float(np.max(np.abs(wron3 - ref3))),
        "kappa_chain": float(np.max(np.abs(chain - chain[0]))),
    }
    return IdentityReport(u=float(u), residuals=residuals)


def su11_residuals(profile: BandwidthProfile, table: ConnectionTable, u: float) -> Dict[str, float]:
    """
    Compare numeric products of L and R matrices with their SU(1,1) form.

    L_j...L_1 = [[conj b_j-, a_j-], [conj a_j-, b_j-]] and
    R_{l+1}...R_n = [[a_l+, conj b_l+], [b_l+, conj a_l+]].

    Returns:
        Max absolute residual for the L side and the R side
    """
    if not u > 0:
        raise DomainError(f"spectral variable must be positive, got u={u}")
    c = table.evaluate(u)
    n = profile.n

    worst_l = 0.0
    prod = np.eye(2, dtype=complex)
    for j in range(1, n + 1):
        prod = build_L(profile, j).evaluate(u) @ prod
        expected = np.array([[np.conj(c["bminus"][j]), c["aminus"][j]], [np.conj(c["aminus"][j]), c["bminus"][j]]])
        worst_l = max(worst_l, float(np.max(np.abs(prod - expected))))

    worst_r = 0.0
    prod = np.eye(2, dtype=complex)
    for l in range(n - 1, -1, -1):
        prod = build_R(profile, l + 1).evaluate(u) @ prod
        expected = np.array([[c["aplus"][l], np.conj(c["bplus"][l])], [c["bplus"][l], np.conj(c["aplus"][l])]])
        worst_r = max(worst_r, float(np.max(np.abs(prod - expected))))

    return {"ljprod": worst_l, "rlprod": worst_r}


def uniform_bound(profile: BandwidthProfile, branch: Union[Branch, str]) -> float:
    """
    Bound on sup |Phi| over u > 0 and all x.

    Phi+ is controlled by the l1-norms of the R matrices, Phi- by those of L.
    """
    q = profile.q
    if Branch(branch) is Branch.PLUS:
        factors = 1.0 + q[:-1] / q[1:]
    else:
        factors = 1.0 + q[1:] / q[:-1]
    return float(np.prod(factors)) + 1.0
