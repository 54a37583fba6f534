"""
Kernel Package
==============

Reproducing kernel evaluation: integrand decomposition, generic assembly,
closed forms and the diagonal formula.
"""

from varband.kernel.evaluator import (
    DecayReport,
    KernelEvaluator,
    build_evaluator,
    decay_fit,
    diagonal_lower_bound,
    kernel_closed_n2,
    kernel_diagonal,
    kernel_eval,
    kernel_one_jump,
)
from varband.kernel.theta import ThetaDecomposition, ThetaTerm, theta_decompose

__all__ = [
    "DecayReport",
    "KernelEvaluator",
    "ThetaDecomposition",
    "ThetaTerm",
    "build_evaluator",
    "decay_fit",
    "diagonal_lower_bound",
    "kernel_closed_n2",
    "kernel_diagonal",
    "kernel_eval",
    "kernel_one_jump",
    "theta_decompose",
]
