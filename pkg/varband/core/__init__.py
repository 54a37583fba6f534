"""
Core Package
============

Bandwidth profiles, almost periodic polynomials and transfer matrices.
"""

from varband.core.appoly import APPoly, ap_add, ap_conj, ap_eval, ap_modulus_squared, ap_mul
from varband.core.piecewise import BandwidthProfile, Interval, interval_index, mu_p
from varband.core.transfer import (
    Branch,
    ConnectionTable,
    TransferMatrix,
    build_L,
    build_R,
    connection_table,
    phi,
    wronskian_identities,
)

__all__ = [
    "APPoly",
    "BandwidthProfile",
    "Branch",
    "ConnectionTable",
    "Interval",
    "TransferMatrix",
    "ap_add",
    "ap_conj",
    "ap_eval",
    "ap_modulus_squared",
    "ap_mul",
    "build_L",
    "build_R",
    "connection_table",
    "interval_index",
    "mu_p",
    "phi",
    "wronskian_identities",
]
