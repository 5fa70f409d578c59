"""
환경 설정 파일 (numerical settings, overridable through .env / environment)
"""
import logging
import os
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _int_env(name, default):
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _float_env(name, default):
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _sizes_env(name, default):
    value = os.getenv(name)
    if value in (None, ""):
        return list(default)
    return [int(v) for v in value.split(",") if v.strip()]


class Config:
    # 난수 시드 (PCG64 via numpy.random.default_rng)
    DEFAULT_SEED = _int_env("CMV_SEED", 1)

    # spy / check threshold: TOL_SCALE * n * u * ||T||_F
    TOL_SCALE = _float_env("CMV_TOL_SCALE", 10.0)

    # breakdown / deflation threshold: DEFLATION_SCALE * n * u * ||U||_F
    DEFLATION_SCALE = _float_env("CMV_DEFLATION_SCALE", 10.0)

    # QR iteration
    MAX_STEPS_PER_EIGENVALUE = _int_env("CMV_MAX_STEPS_PER_EIGENVALUE", 30)
    EXCEPTIONAL_SHIFT_AFTER = _int_env("CMV_EXCEPTIONAL_SHIFT_AFTER", 10)

    # restart: seeded candidates tried before coordinate vectors
    RESTART_RETRIES = _int_env("CMV_RESTART_RETRIES", 3)

    LOG_LEVEL = os.getenv("CMV_LOG_LEVEL", "WARNING")

    BENCH_SIZES = _sizes_env("CMV_BENCH_SIZES", (32, 64, 128))

    @classmethod
    def validate(cls):
        """설정 값 검증"""
        if cls.DEFAULT_SEED < 0:
            raise ValueError("CMV_SEED must be nonnegative")
        if cls.TOL_SCALE <= 0:
            raise ValueError("CMV_TOL_SCALE must be positive")
        if cls.DEFLATION_SCALE <= 0:
            raise ValueError("CMV_DEFLATION_SCALE must be positive")
        if cls.MAX_STEPS_PER_EIGENVALUE < 1:
            raise ValueError("CMV_MAX_STEPS_PER_EIGENVALUE must be at least 1")
        if cls.EXCEPTIONAL_SHIFT_AFTER < 1:
            raise ValueError("CMV_EXCEPTIONAL_SHIFT_AFTER must be at least 1")
        if cls.RESTART_RETRIES < 0:
            raise ValueError("CMV_RESTART_RETRIES must be nonnegative")
        if not cls.BENCH_SIZES or min(cls.BENCH_SIZES) < 2:
            raise ValueError("CMV_BENCH_SIZES must list sizes >= 2")
        if logging.getLevelName(cls.LOG_LEVEL.upper()) not in range(0, 60):
            raise ValueError(f"unknown CMV_LOG_LEVEL {cls.LOG_LEVEL!r}")
        logger.debug("✅ 설정 검증 완료")
