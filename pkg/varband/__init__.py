"""
varband
=======

Reproducing kernels, spectral measures and sampling densities of
variable-bandwidth Paley-Wiener spaces for piecewise-constant bandwidth
profiles.
"""

__all__ = ["__version__"]

__version__ = "0.1.0"
