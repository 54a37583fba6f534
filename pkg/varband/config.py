"""
Configuration
=============

Numerical tolerances, output formatting and logging options for varband.

All values can be overridden through environment variables prefixed with
``VARBAND_`` or through a ``.env`` file in the working directory.

Features:
- Canonicalization tolerances for almost periodic polynomials
- Quadrature and series controls for the J function
- Gram-matrix thresholds and reference grid sizing for sampling probes
- Output precision and default seed
"""

import math
from typing import Any, Dict, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from the environment.

    Attributes:
        log_level: Level of the stderr log sink
        log_file: Optional path of a rotating log file
        merge_tolerance: Relative tolerance for identifying two frequencies
        prune_tolerance: Relative magnitude below which coefficients are dropped
        gl_order: Number of Gauss-Legendre nodes per panel
        quad_tolerance: Panel refinement tolerance for J quadrature
        quad_max_panels: Panel budget per integration interval
        series_max_ratio: Largest |R| for which the J series is auto-selected
        series_eps: Default truncation error for the J series
        imag_tolerance: Allowed imaginary residue of assembled kernel values
        gram_threshold: Relative eigenvalue threshold for Gram matrices
        oversampling: Oversampling factor of the reference grid
        sampling_window: Half width of the default sampling window
        sampling_guard: Extra margin of probe sets outside the window
        trace_band: Allowed spread factor of the trace bound ratios
        csv_digits: Significant digits written to CSV files
        default_seed: Seed used when none is given
    """

    model_config = SettingsConfigDict(
        env_prefix="VARBAND_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = "INFO"
    log_file: Optional[str] = None

    merge_tolerance: float = Field(default=1e-9, gt=0)
    prune_tolerance: float = Field(default=1e-14, ge=0)

    gl_order: int = Field(default=15, ge=2)
    quad_tolerance: float = Field(default=1e-12, gt=0)
    quad_max_panels: int = Field(default=2**16, ge=1)

    series_max_ratio: float = Field(default=0.95, gt=0, lt=1)
    series_eps: float = Field(default=1e-13, gt=0)

    imag_tolerance: float = Field(default=1e-9, gt=0)
    gram_threshold: float = Field(default=1e-10, gt=0)
    oversampling: int = Field(default=8, ge=1)
    sampling_window: float = Field(default=40.0, gt=0)
    sampling_guard: float = Field(default=10.0, ge=0)
    trace_band: float = Field(default=3.0, gt=1)

    csv_digits: int = Field(default=15, ge=1, le=17)
    default_seed: int = 0
    default_omega: float = Field(default=math.pi**2, gt=0)


settings = Settings()


def get_config_summary() -> Dict[str, Any]:
    """
    Get the active configuration as a plain dictionary.

    Returns:
        Dictionary of all setting names and values
    """
    return settings.model_dump()
