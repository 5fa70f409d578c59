"""
Micro-benchmark: reduction and eigensolver timings over Haar-random unitaries
"""
import logging
import math
import time
from typing import Iterable, Optional

import pandas as pd

from config import Config
from reduction.cmv import unitary_cmv_reduction
from solvers.qr_iter import eigensolve_unitary
from .generators import haar_random

logger = logging.getLogger(__name__)

COLUMNS = ["n", "ms_reduce", "ms_eig", "residual"]


def bench_size(n: int, seed: int) -> dict:
    u = haar_random(n, seed)
    start = time.perf_counter()
    form = unitary_cmv_reduction(u, seed=seed)
    reduce_ms = (time.perf_counter() - start) * 1000.0
    start = time.perf_counter()
    eig = eigensolve_unitary(form.t, form.profile)
    eig_ms = (time.perf_counter() - start) * 1000.0
    if not eig.converged:
        logger.warning("⚠️ eigensolver did not converge for n=%d", n)
    return {"n": n, "ms_reduce": reduce_ms, "ms_eig": eig_ms, "residual": form.report.residual}


def run_bench(sizes: Optional[Iterable[int]] = None, seed: Optional[int] = None) -> pd.DataFrame:
    sizes = list(sizes) if sizes is not None else list(Config.BENCH_SIZES)
    seed = Config.DEFAULT_SEED if seed is None else seed
    rows = []
    for n in sizes:
        rows.append(bench_size(n, seed))
        logger.info("bench n=%d: reduce %.1f ms", n, rows[-1]["ms_reduce"])
    return pd.DataFrame(rows, columns=COLUMNS)


def growth_exponent(df: pd.DataFrame, column: str = "ms_reduce") -> float:
    """Slope of log(time) against log(n) between the smallest and largest size"""
    ordered = df.sort_values("n")
    first, last = ordered.iloc[0], ordered.iloc[-1]
    if first["n"] == last["n"] or first[column] <= 0:
        return float("nan")
    return math.log(last[column] / first[column]) / math.log(last["n"] / first["n"])


def to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, columns=COLUMNS)
