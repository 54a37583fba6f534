"""
Shared fixtures for the varband test suite.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from varband.core.piecewise import BandwidthProfile
from varband.spectral.spectral_set import SpectralSet


@pytest.fixture
def flat_profile() -> BandwidthProfile:
    """p = 1 everywhere; the space is the classical Paley-Wiener space."""
    return BandwidthProfile.constant(1.0)


@pytest.fixture
def one_jump_profile() -> BandwidthProfile:
    return BandwidthProfile([0.5], [1.0, 4.0])


@pytest.fixture
def figure_profile() -> BandwidthProfile:
    """Two jumps at -3 and 3 with q = (1, 2, 1)."""
    return BandwidthProfile([-3.0, 3.0], [1.0, 0.25, 1.0])


@pytest.fixture
def three_jump_profile() -> BandwidthProfile:
    return BandwidthProfile([-2.0, 0.0, 3.0], [1.0, 0.5, 2.0, 1.0])


@pytest.fixture
def band() -> SpectralSet:
    """Lambda = [0, pi^2], so |Lambda^(1/2)| = pi and the critical density is 1."""
    return SpectralSet.band(math.pi**2)


@pytest.fixture
def random_profiles():
    """Seeded random profiles with one to three jumps and moderate level ratios."""
    rng = np.random.default_rng(20240601)
    return [BandwidthProfile.random(n, rng, level_range=(0.25, 4.0)) for n in (1, 2, 3, 3)]
