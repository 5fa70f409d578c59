"""
동반 행렬(companion) 분해로 다항식의 근을 계산하는 Roots Worker
"""
from typing import Any, Dict, Optional

from solvers.qr_iter import ShiftStrategy
from solvers.rootfind import MonicPolynomial, roots
from .base_worker import BaseWorker


class RootsWorker(BaseWorker):
    """다항식 근 계산 워커"""

    def __init__(self):
        super().__init__(name="Roots", role="polynomial rootfinder")

    def execute(self, polynomial: MonicPolynomial, shift: Optional[ShiftStrategy] = None,
                max_steps: Optional[int] = None, scale: bool = False,
                seed: Optional[int] = None) -> Dict[str, Any]:
        result = roots(polynomial, shift=shift, max_steps=max_steps, scale=scale, seed=seed)
        return {
            "success": True,
            "result": result,
            "converged": result.converged,
        }
