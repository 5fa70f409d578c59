"""
Exception hierarchy shared by all modules
"""
from typing import Optional, Tuple


class CMVError(Exception):
    """Base class for every error raised by the toolkit"""


class DimensionError(CMVError, ValueError):
    """Operand shapes do not fit the operation"""


class NonFiniteError(CMVError, ValueError):
    """NaN or Inf found where only finite scalars are admitted"""


class NonUnitaryError(CMVError, ValueError):
    """Input expected to be unitary fails the unitarity tolerance"""

    def __init__(self, residual: float, tolerance: float):
        super().__init__(f"matrix is not unitary: residual {residual:.3e} > tolerance {tolerance:.3e}")
        self.residual = residual
        self.tolerance = tolerance


class ProfileError(CMVError):
    """An entry outside the achievable profile exceeds the threshold"""

    def __init__(self, index: Tuple[int, int], magnitude: float, threshold: float):
        super().__init__(
            f"entry {index} has magnitude {magnitude:.3e} outside the profile (threshold {threshold:.3e})"
        )
        self.index = index
        self.magnitude = magnitude
        self.threshold = threshold


class FormatError(CMVError, ValueError):
    """Malformed CMTX or polynomial text"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GeneratorError(CMVError, ValueError):
    """Invalid test-matrix generator specification"""
