"""
Closed-Form Kernels
===================

Explicit reproducing kernels on Lambda = [0, Omega] for profiles with two
jumps (written in terms of J_r = Re J) and with one jump (elementary sincs).

The two-jump blocks are stated for knots at -T/2 and T/2; other knot
positions are handled by translating x and y by the knot midpoint.
Blocks below the diagonal follow from k_lj(x, y) = k_jl(y, x).
"""

import math
from typing import Callable, Dict, Tuple, Union

import numpy as np

from varband.core.piecewise import BandwidthProfile, interval_index
from varband.errors import ValidationError

ArrayLike = Union[float, np.ndarray]
JrFunction = Callable[[np.ndarray], np.ndarray]


def _sinc(x: ArrayLike) -> np.ndarray:
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def k00(x, y, T, q0, q1, q2, jr: JrFunction, sqrt_omega: float):
    s = q0 * (x + y + T)
    return (
        q0 * sqrt_omega / math.pi * _sinc(q0 * sqrt_omega * (x - y))
        + (1 - q0**2 / q1**2) * (1 + q1**2 / q2**2) / (4 * q0) * jr(s)
        + (1 - q0 / q1) ** 2 * (1 - q1**2 / q2**2) / (8 * q0) * jr(s + 2 * q1 * T)
        + (1 + q0 / q1) ** 2 * (1 - q1**2 / q2**2) / (8 * q0) * jr(s - 2 * q1 * T)
    )


def k11(x, y, T, q0, q1, q2, jr: JrFunction, sqrt_omega: float):
    return (
        0.5 * ((1 + q1**2 / q2**2) / q0 + (1 + q1**2 / q0**2) / q2) * jr(q1 * (x - y))
        + (1 - q1**2 / q2**2) / (2 * q0) * jr(q1 * (x + y - T))
        + (1 - q1**2 / q0**2) / (2 * q2) * jr(q1 * (x + y + T))
    )


def k22(x, y, T, q0, q1, q2, jr: JrFunction, sqrt_omega: float):
    s = q2 * (x + y - T)
    return (
        q2 * sqrt_omega / math.pi * _sinc(q2 * sqrt_omega * (x - y))
        + (1 + q1**2 / q0**2) * (1 - q2**2 / q1**2) / (4 * q2) * jr(s)
        + (1 - q1**2 / q0**2) * (1 - q2 / q1) ** 2 / (8 * q2) * jr(s - 2 * q1 * T)
        + (1 - q1**2 / q0**2) * (1 + q2 / q1) ** 2 / (8 * q2) * jr(s + 2 * q1 * T)
    )


def k01(x, y, T, q0, q1, q2, jr: JrFunction, sqrt_omega: float):
    xs = q0 * (x + T / 2)
    return (
        (1 + q0 / q1) * (1 + q1 / q2) ** 2 / (4 * q0) * jr(xs - q1 * (y + T / 2))
        + (1 - q0 / q1) * (1 - q1 / q2) ** 2 / (4 * q0) * jr(xs + q1 * (y + T / 2))
        + (1 + q0 / q1) * (1 - q1**2 / q2**2) / (4 * q0) * jr(xs + q1 * (y - 3 * T / 2))
        + (1 - q0 / q1) * (1 - q1**2 / q2**2) / (4 * q0) * jr(xs - q1 * (y - 3 * T / 2))
    )


def k02(x, y, T, q0, q1, q2, jr: JrFunction, sqrt_omega: float):
    xs = q0 * (x + T / 2)
    ys = q2 * (y - T / 2)
    return (
        (1 - q0 / q1) * (1 - q1 / q2) / (2 * q0) * jr(xs + q1 * T - ys)
        + (1 + q0 / q1) * (1 + q1 / q2) / (2 * q0) * jr(xs - q1 * T - ys)
    )


def k12(x, y, T, q0, q1, q2, jr: JrFunction, sqrt_omega: float):
    ys = q2 * (y - T / 2)
    return (
        (1 + q1 / q0) ** 2 * (1 + q2 / q1) / (4 * q2) * jr(q1 * (x - T / 2) - ys)
        + (1 - q1 / q0) ** 2 * (1 - q2 / q1) / (4 * q2) * jr(q1 * (x - T / 2) + ys)
        + (1 - q1**2 / q0**2) * (1 + q2 / q1) / (4 * q2) * jr(q1 * (x + 3 * T / 2) + ys)
        + (1 - q1**2 / q0**2) * (1 - q2 / q1) / (4 * q2) * jr(q1 * (x + 3 * T / 2) - ys)
    )


BLOCKS: Dict[Tuple[int, int], Callable] = {
    (0, 0): k00,
    (1, 1): k11,
    (2, 2): k22,
    (0, 1): k01,
    (0, 2): k02,
    (1, 2): k12,
}


def block(j: int, l: int) -> Callable:
    """
    Block function k_jl(x, y, T, q0, q1, q2, jr, sqrt_omega).

    Lower blocks are the transposed upper ones.
    """
    if (j, l) in BLOCKS:
        return BLOCKS[(j, l)]
    upper = BLOCKS[(l, j)]

    def transposed(x, y, T, q0, q1, q2, jr, sqrt_omega):
        return upper(y, x, T, q0, q1, q2, jr, sqrt_omega)

    return transposed


def two_jump_kernel(
    profile: BandwidthProfile,
    sqrt_omega: float,
    jr: JrFunction,
    x: ArrayLike,
    y: ArrayLike,
) -> Union[float, np.ndarray]:
    """
    Closed-form kernel of a two-jump profile on [0, Omega].

    Args:
        profile: Profile with exactly two knots
        sqrt_omega: Square root of Omega
        jr: Real part of J for this profile and Omega
        x: First argument(s)
        y: Second argument(s), broadcast against x

    Returns:
        Kernel values
    """
    if profile.n != 2:
        raise ValidationError(f"closed form needs two jumps, got {profile.n}", field="profile")
    t1, t2 = profile.knots
    T, center = t2 - t1, 0.5 * (t1 + t2)
    q0, q1, q2 = (float(v) for v in profile.q)

    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    jx, jy = np.asarray(interval_index(profile, xb)), np.asarray(interval_index(profile, yb))
    xc, yc = xb - center, yb - center

    out = np.zeros(xb.shape)
    for j in range(3):
        for l in range(3):
            mask = (jx == j) & (jy == l)
            if np.any(mask):
                out[mask] = block(j, l)(xc[mask], yc[mask], T, q0, q1, q2, jr, sqrt_omega)
    return float(out) if out.ndim == 0 else out


def one_jump_kernel(profile: BandwidthProfile, sqrt_omega: float, x: ArrayLike, y: ArrayLike) -> Union[float, np.ndarray]:
    """
    Closed-form kernel of a one-jump profile on [0, Omega].

    With rho = (q0 - q1) / (q0 + q1) and the knot at t:
    k = (q0 W / pi)(sinc(q0 W (x - y)) - rho sinc(q0 W (x + y - 2t))) left of t,
    k = (q1 W / pi)(sinc(q1 W (x - y)) + rho sinc(q1 W (x + y - 2t))) right of t,
    k = 2 q0 q1 W / (pi (q0 + q1)) sinc(W (q0 (x - t) - q1 (y - t))) across.
    """
    if profile.n != 1:
        raise ValidationError(f"one-jump closed form needs one jump, got {profile.n}", field="profile")
    t = profile.knots[0]
    q0, q1 = (float(v) for v in profile.q)
    W = sqrt_omega
    rho = (q0 - q1) / (q0 + q1)

    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    left_x, left_y = xb <= t, yb <= t
    u, v = xb - t, yb - t

    both_left = q0 * W / math.pi * (_sinc(q0 * W * (u - v)) - rho * _sinc(q0 * W * (u + v)))
    both_right = q1 * W / math.pi * (_sinc(q1 * W * (u - v)) + rho * _sinc(q1 * W * (u + v)))
    mixed_scale = 2 * q0 * q1 * W / (math.pi * (q0 + q1))
    x_left = mixed_scale * _sinc(W * (q0 * u - q1 * v))
    y_left = mixed_scale * _sinc(W * (q0 * v - q1 * u))

    out = np.where(
        left_x & left_y,
        both_left,
        np.where(~left_x & ~left_y, both_right, np.where(left_x, x_left, y_left)),
    )
    return float(out) if out.ndim == 0 else out
