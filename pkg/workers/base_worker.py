"""
모든 워커의 기본 클래스
작업 실행, 실행 이력 관리 등 공통 기능 제공
"""
import logging
import time
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class BaseWorker:
    """모든 워커의 기본 클래스"""

    def __init__(self, name: str, role: str):
        self.name = name
        self.role = role
        self.run_history: List[Dict[str, Any]] = []

    def execute(self, **params) -> Dict[str, Any]:
        """Subclasses implement the numerical job; returns a result dict with 'success'"""
        raise NotImplementedError

    def run(self, **params) -> Dict[str, Any]:
        """execute() with timing; the entry goes to run_history"""
        start = time.perf_counter()
        result = self.execute(**params)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        self.run_history.append({
            "params": sorted(params),
            "success": bool(result.get("success")),
            "ms": elapsed_ms,
        })
        logger.debug("%s worker finished in %.1f ms", self.name, elapsed_ms)
        return result

    def reset(self):
        """실행 이력 초기화"""
        self.run_history = []
        logger.debug("🔄 %s worker history cleared", self.name)

    def get_status(self) -> Dict[str, Any]:
        """워커 상태 정보"""
        return {
            "name": self.name,
            "role": self.role,
            "history_length": len(self.run_history),
        }
