#!/usr/bin/env python3
"""
varband: Variable-Bandwidth Kernels and Densities
=================================================

Main entry point for the varband command line.
This module loads the environment, configures logging and dispatches to the
click command group.

Features:
- Spectral density kappa and the J function (quadrature, series, elementary)
- Reproducing kernel grids, slices and diagonals
- Beurling densities, averaged trace and empirical frame-bound sweeps
- Verification of the exact identities

Usage:
    python app.py kappa --profile profile.json
    python app.py kernel --mode slice --x0 0 --grid -10:10:401
    python app.py verify --seed 3

Environment Variables:
    VARBAND_LOG_LEVEL: Level of the stderr log sink (default INFO)
    VARBAND_LOG_FILE: Optional rotating log file
    VARBAND_QUAD_TOLERANCE: Panel tolerance of the J quadrature
    VARBAND_OVERSAMPLING: Oversampling of the sampling reference grid
"""

import sys
from pathlib import Path
from typing import Optional

from dotenv import find_dotenv, load_dotenv

# Add project root to Python path for imports
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

# Must run before varband.config builds the settings singleton.
load_dotenv(find_dotenv(usecwd=True))

from loguru import logger

from varband.config import settings
from varband.ui.cli import cli


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Configure logging for the application.

    Args:
        level: Level of the stderr sink; default settings.log_level
        log_file: Rotating file sink; default settings.log_file
    """
    logger.remove()
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        level=level or settings.log_level,
    )
    log_file = log_file or settings.log_file
    if log_file:
        logger.add(
            log_file,
            rotation="10 MB",
            retention="7 days",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            level="DEBUG",
        )


def main() -> None:
    """
    Main application entry point.

    Sets up logging and runs the command line.
    """
    setup_logging()

    try:
        cli(prog_name="varband")
    except Exception as e:
        logger.error(f"Unexpected failure: {e}")
        sys.exit(2)


if __name__ == "__main__":
    main()
