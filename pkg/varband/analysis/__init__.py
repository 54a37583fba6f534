"""
Analysis Package
================

Densities, averaged trace, empirical frame-bound probes and the
verification suite.
"""

from varband.analysis.density import (
    DensityReport,
    PointSet,
    TraceReport,
    averaged_trace,
    beurling_densities,
    trace_convergence_report,
)
from varband.analysis.sampling import (
    GramSystem,
    SweepRow,
    density_sweep,
    empirical_frame_bounds,
    interpolation_conditioning,
)
from varband.analysis.verification import VerificationReport, run_verification

__all__ = [
    "DensityReport",
    "GramSystem",
    "PointSet",
    "SweepRow",
    "TraceReport",
    "VerificationReport",
    "averaged_trace",
    "beurling_densities",
    "density_sweep",
    "empirical_frame_bounds",
    "interpolation_conditioning",
    "run_verification",
    "trace_convergence_report",
]
