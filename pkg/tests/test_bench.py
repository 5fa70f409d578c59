import math

import pandas as pd

from tools.bench_tool import COLUMNS, growth_exponent, run_bench, to_csv


def test_growth_exponent_of_cubic_timings():
    df = pd.DataFrame({"n": [32, 64, 128], "ms_reduce": [1.0, 8.0, 64.0], "ms_eig": [1, 1, 1], "residual": [0, 0, 0]})
    assert math.isclose(growth_exponent(df), 3.0)


def test_small_bench_run():
    df = run_bench([6, 8], seed=2)
    assert list(df.columns) == COLUMNS
    assert list(df["n"]) == [6, 8]
    assert (df["residual"] < 1e-12).all()
    assert to_csv(df).splitlines()[0] == "n,ms_reduce,ms_eig,residual"
