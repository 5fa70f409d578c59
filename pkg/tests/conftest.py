import os
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from linalg.kernels import UNIT_ROUNDOFF, frobenius_norm  # noqa: E402
from tools.generators import circulant_generator, haar_random  # noqa: E402


@pytest.fixture
def data_dir() -> Path:
    return Path(__file__).parent / "data"


@pytest.fixture
def haar16():
    return haar_random(16, 7)


@pytest.fixture
def circulant16():
    return circulant_generator(16)


@pytest.fixture
def bound():
    """10 * n * u * ||a||_F"""
    def _bound(a, factor=10.0):
        return factor * a.shape[0] * UNIT_ROUNDOFF * frobenius_norm(a)
    return _bound


@pytest.fixture
def pairing_error():
    """Largest distance under the optimal one-to-one pairing of two multisets"""
    def _error(found, expected):
        found = np.asarray(found, dtype=np.complex128)
        expected = np.asarray(expected, dtype=np.complex128)
        assert found.shape == expected.shape
        cost = np.abs(found[:, np.newaxis] - expected[np.newaxis, :])
        rows, cols = linear_sum_assignment(cost)
        return float(cost[rows, cols].max())
    return _error
