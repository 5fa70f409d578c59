"""
Reduction report shared by the Lanczos and Householder paths
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from linalg.kernels import UNIT_ROUNDOFF


def deflation_threshold(n: int, norm_u: float, scale: float) -> float:
    """scale * n * u * ||U||_F"""
    return scale * n * UNIT_ROUNDOFF * norm_u


@dataclass
class ReductionReport:
    n: int
    residual: float
    unitarity: float
    deflation_threshold: float
    breakdown_step: Optional[int] = None
    breakdown_norms: List[float] = field(default_factory=list)
    steps: int = 0
    segments: List[Dict[str, Any]] = field(default_factory=list)
    checks: Dict[str, float] = field(default_factory=dict)

    @property
    def restarts(self) -> int:
        return max(len(self.segments) - 1, 0)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["threshold"] = data.pop("deflation_threshold")
        data["restarts"] = self.restarts
        return data
