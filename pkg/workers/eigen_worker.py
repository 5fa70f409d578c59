"""
CMV-like 축소 후 shifted QR로 고유값을 계산하는 Eigen Worker
"""
from typing import Any, Dict, Optional

import numpy as np

from reduction.cmv import unitary_cmv_reduction
from solvers.qr_iter import ShiftStrategy, eigensolve_unitary
from .base_worker import BaseWorker


class EigenWorker(BaseWorker):
    """유니터리 고유값 워커"""

    def __init__(self):
        super().__init__(name="Eigen", role="unitary eigensolver")

    def execute(self, u: np.ndarray, seed: Optional[int] = None, shift: Optional[ShiftStrategy] = None,
                max_steps: Optional[int] = None) -> Dict[str, Any]:
        form = unitary_cmv_reduction(u, seed=seed)
        result = eigensolve_unitary(form.t, form.profile, shift=shift, max_steps=max_steps)
        return {
            "success": True,
            "form": form,
            "result": result,
            "converged": result.converged,
        }
