"""
유니터리 행렬을 CMV-like 형태로 축소하고 결과를 검증하는 Reduce Worker
"""
from typing import Any, Dict, Optional

import numpy as np

from config import Config
from linalg.kernels import UNIT_ROUNDOFF, frobenius_norm
from reduction.cmv import Violation, unitary_cmv_reduction, verify_cmv_like
from .base_worker import BaseWorker


class ReduceWorker(BaseWorker):
    """CMV 축소 워커"""

    def __init__(self):
        super().__init__(name="Reduce", role="unitary to CMV-like reduction")

    def execute(self, u: np.ndarray, seed: Optional[int] = None, z: Optional[np.ndarray] = None,
                tol_scale: Optional[float] = None) -> Dict[str, Any]:
        """
        축소 후 검증: CMV 프로파일, 유니터리성, 그리고 ||Q^H U Q - T||_F
        (모두 tol_scale * n * u * ||U||_F 기준)
        """
        form = unitary_cmv_reduction(u, z=z, seed=seed)
        n = form.t.shape[0]
        scale = Config.TOL_SCALE if tol_scale is None else tol_scale
        threshold = scale * n * UNIT_ROUNDOFF * frobenius_norm(u)
        ok, violations = verify_cmv_like(form.t, form.profile, threshold)
        if form.report.residual > threshold:
            violations.append(Violation("residual", None, form.report.residual))
            ok = False
        return {
            "success": True,
            "form": form,
            "verified": ok,
            "threshold": threshold,
            "violations": [v.to_dict() for v in violations],
        }
