import numpy as np
import pytest

from linalg.errors import DimensionError
from linalg.kernels import UNIT_ROUNDOFF, hermitian_part, random_unit_vector
from reduction.lanczos import (
    BlockTridiagonalForm,
    PrematureStop,
    block_lanczos,
    offdiag_rank_check,
    verify_simultaneous_reduction,
)
from tools.generators import circulant_generator, fourier_matrix, haar_random


def _run(u, seed):
    return block_lanczos(hermitian_part(u), random_unit_vector(u.shape[0], seed), u)


def test_haar_reduces_to_two_by_two_blocks(haar16):
    form = _run(haar16, 3)
    assert isinstance(form, BlockTridiagonalForm)
    assert form.block_sizes == [2] * 8
    assert form.report.residual < 1e-12
    assert form.report.unitarity < 100 * 16 * UNIT_ROUNDOFF
    h = form.t
    np.testing.assert_allclose(h, h.conj().T, atol=1e-14)


def test_simultaneous_reduction_of_both_parts():
    u = haar_random(8, 11)
    form = _run(u, 2)
    report = verify_simultaneous_reduction(form, u, tol_scale=1e8)
    assert report.checks["passed"] == 1.0
    assert report.checks["off_profile_hermitian"] == 0.0


def test_unitary_couplings_have_rank_one():
    u = haar_random(8, 5)
    form = _run(u, 4)
    decisions = offdiag_rank_check(form, scale=1e-8)
    assert len(decisions) == 6
    assert all(d.numerical_rank == 1 for d in decisions)


@pytest.mark.parametrize("m", [4, 8, 16])
@pytest.mark.parametrize("seed", range(20))
def test_fourier_breaks_down_early(m, seed):
    u = fourier_matrix(2 * m)
    result = _run(u, seed)
    assert isinstance(result, PrematureStop)
    assert result.breakdown_step <= 3
    assert result.size < 2 * m
    assert max(result.singular_values, default=0.0) <= result.threshold


def test_rejects_zero_start():
    u = haar_random(4, 1)
    with pytest.raises(DimensionError):
        block_lanczos(hermitian_part(u), np.zeros((4, 1)), u)


def test_identity_stops_at_the_first_step():
    result = _run(np.eye(4, dtype=np.complex128), 1)
    assert isinstance(result, PrematureStop)
    assert result.breakdown_step == 1
    assert result.block_sizes == [1]


def test_circulant_reduces_to_two_by_two_blocks():
    form = _run(circulant_generator(16), 2)
    assert isinstance(form, BlockTridiagonalForm)
    assert form.block_sizes == [2] * 8
    assert form.restart_starts == []


def test_odd_size_ends_with_a_single_block():
    form = _run(haar_random(7, 3), 1)
    assert isinstance(form, BlockTridiagonalForm)
    assert form.block_sizes == [2, 2, 2, 1]


def test_breakdown_is_deterministic():
    u = fourier_matrix(16)
    first, second = _run(u, 4), _run(u, 4)
    assert first.breakdown_step == second.breakdown_step
    assert np.array_equal(first.q, second.q)
