from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from depthkit import WeightedSample


@pytest.fixture
def triangle() -> WeightedSample:
    """Three unit atoms at (0,1), (-1,0), (1,0)."""
    return WeightedSample([(0.0, 1.0), (-1.0, 0.0), (1.0, 0.0)])


@pytest.fixture
def cross_six() -> WeightedSample:
    """Six unit atoms on the axes: (+-1,0), (+-2,0), (0,+-1)."""
    pts = [(1.0, 0.0), (-1.0, 0.0), (2.0, 0.0), (-2.0, 0.0),
           (0.0, 1.0), (0.0, -1.0)]
    return WeightedSample(pts)
