import numpy as np
import pytest

from linalg.errors import NonUnitaryError, ProfileError
from linalg.kernels import (
    UNIT_ROUNDOFF,
    anti_hermitian_part,
    frobenius_norm,
    numerical_rank_2x2,
    unitarity_residual,
)
from reduction.cmv import (
    compress_to_profile,
    lanczos_reduction,
    restart_on_breakdown,
    unitary_cmv_reduction,
    verify_cmv_like,
    verify_rank_pattern,
)
from reduction.profile import BLOCK_TRIDIAGONAL, off_profile_max, text_to_mask
from solvers.qr_iter import ShiftStrategy, qr_step
from tools.generators import direct_sum, fourier_matrix, haar_random
from tools.spy_tool import spy_image

HAAR_SIZES = (6, 7, 12, 16, 31, 32)
HAAR_CASES = [(HAAR_SIZES[k % len(HAAR_SIZES)], 100 + k) for k in range(50)]


@pytest.mark.parametrize("n,seed", HAAR_CASES)
def test_haar_reduction_properties(n, seed, bound):
    u = haar_random(n, seed)
    form = unitary_cmv_reduction(u, seed=seed)
    thr = bound(u)
    assert unitarity_residual(form.q) <= 10 * n * UNIT_ROUNDOFF
    assert frobenius_norm(form.q.conj().T @ u @ form.q - form.t) <= thr
    ok, violations = verify_cmv_like(form.t, form.profile, thr)
    assert ok, violations
    for coupling in form.profile.couplings():
        assert numerical_rank_2x2(coupling.sub_block(form.t)).sigma(1) <= thr
        assert numerical_rank_2x2(coupling.super_block(form.t)).sigma(1) <= thr
    if n % 2 == 0:
        assert verify_rank_pattern(form.t, thr)[0]
    # the anti-Hermitian part fills the mirrored pattern, so only block tridiagonal
    t_ah = form.q.conj().T @ anti_hermitian_part(u) @ form.q
    assert off_profile_max(t_ah, form.profile.as_kind(BLOCK_TRIDIAGONAL).allowed_mask)[0] <= thr


def test_haar_is_a_single_segment(haar16):
    form = unitary_cmv_reduction(haar16, seed=1)
    assert len(form.profile.segments) == 1
    assert form.profile.block_sizes == [2] * 8
    assert form.report.restarts == 0


def test_fourier32_splits_by_eigenvalue_multiplicity():
    form = unitary_cmv_reduction(fourier_matrix(32), seed=1)
    sizes = [seg.size for seg in form.profile.segments]
    assert sizes == [4] * 7 + [3, 1]
    assert form.report.restarts == 8
    assert len(form.report.breakdown_norms) == 8
    assert max(form.report.breakdown_norms) <= 1e-12
    grid = spy_image(form.t).grid
    for seg in form.profile.segments:
        assert not grid[seg.end:, seg.start:seg.end].any()
        assert not grid[seg.start:seg.end, seg.end:].any()


def test_circulant16_matches_golden_profile(circulant16, data_dir, bound):
    form = unitary_cmv_reduction(circulant16, seed=1)
    golden = text_to_mask((data_dir / "circulant16_profile.txt").read_text())
    assert np.array_equal(spy_image(form.t, bound(circulant16)).grid, golden)
    assert off_profile_max(form.t, golden)[0] <= bound(circulant16)


def test_identity_is_a_direct_sum_of_trivial_segments():
    form = unitary_cmv_reduction(np.eye(4), seed=1)
    assert [seg.size for seg in form.profile.segments] == [1, 1, 1, 1]
    np.testing.assert_allclose(form.t, np.eye(4), atol=1e-14)


def test_reduction_is_deterministic(haar16):
    a = unitary_cmv_reduction(haar16, seed=9)
    b = unitary_cmv_reduction(haar16, seed=9)
    assert np.array_equal(a.t, b.t)
    assert np.array_equal(a.q, b.q)


def test_rejects_non_unitary():
    with pytest.raises(NonUnitaryError):
        unitary_cmv_reduction(2 * np.eye(3))


def test_restart_zeroes_the_coupling(bound):
    t = direct_sum(haar_random(4, 1), haar_random(4, 2))
    t[4, 3] = 1e-17
    decision = restart_on_breakdown(t, 4, 0, bound(t), seed=1)
    assert decision.breakdown_norm == pytest.approx(1e-17)
    assert t[4, 3] == 0
    assert decision.z.shape == (4, 1)
    assert decision.rank == 2


def test_verify_reports_corrupted_entry(circulant16, bound):
    form = unitary_cmv_reduction(circulant16, seed=1)
    t = form.t.copy()
    t[10, 0] = 1e-3
    ok, violations = verify_cmv_like(t, form.profile, bound(circulant16))
    assert not ok
    assert any(v.kind == "off_profile" and v.index == (10, 0) for v in violations)
    with pytest.raises(ProfileError):
        compress_to_profile(t, form.profile, threshold=bound(circulant16))


def test_restart_refuses_a_live_coupling(bound):
    t = direct_sum(haar_random(4, 1), haar_random(4, 2))
    t[5, 2] = 1e-3
    before = t.copy()
    with pytest.raises(ProfileError) as info:
        restart_on_breakdown(t, 4, 0, bound(t), seed=1)
    assert info.value.index == (5, 2)
    assert np.array_equal(t, before)


def test_direct_sum_restarts_at_the_block_boundary(bound):
    u = direct_sum(haar_random(8, 1), haar_random(8, 2))
    z = np.zeros((16, 1), dtype=np.complex128)
    z[:8] = np.random.default_rng(5).standard_normal((8, 1))
    form = unitary_cmv_reduction(u, z=z, seed=1)
    assert form.report.restarts == 1
    assert form.restart_starts == [8]
    assert [seg.size for seg in form.profile.segments] == [8, 8]
    assert form.report.residual <= bound(u)


def test_compression_is_idempotent(haar16, bound):
    form = unitary_cmv_reduction(haar16, seed=4)
    again, rotations, profile = compress_to_profile(form.t, form.profile, threshold=bound(haar16))
    assert profile.block_sizes == form.profile.block_sizes
    assert all(rot.angle_size <= 1e-12 for rot in rotations)
    np.testing.assert_allclose(np.abs(again), np.abs(form.t), atol=1e-13)


def test_verify_flags_a_full_rank_coupling(haar16, bound):
    form = unitary_cmv_reduction(haar16, seed=1)
    t = form.t.copy()
    t[2:4, 0:2] = 0.5 * np.eye(2)
    profile = form.profile.as_kind(BLOCK_TRIDIAGONAL)
    ok, violations = verify_cmv_like(t, profile, bound(haar16))
    assert not ok
    assert any(v.kind == "rank" and v.index == (2, 0) for v in violations)


def test_rank_pattern_skips_block_diagonal_input(bound):
    t = direct_sum(*(haar_random(2, seed) for seed in range(4)))
    ok, reports = verify_rank_pattern(t, bound(t))
    assert ok
    assert [r["status"] for r in reports] == ["skipped"] * len(reports)


def test_rank_pattern_survives_a_qr_step(circulant16, bound):
    form = unitary_cmv_reduction(circulant16, seed=1)
    step = qr_step(form.t, form.profile, ShiftStrategy.wilkinson())
    t = step.t_next
    assert verify_rank_pattern(t, bound(t))[0]


def test_lanczos_path_agrees_with_householder_path(pairing_error):
    u = haar_random(12, 21)
    z = np.random.default_rng(3).standard_normal((12, 1)).astype(np.complex128)
    lanczos = lanczos_reduction(u, z=z)
    householder = unitary_cmv_reduction(u, z=z)
    assert lanczos.restart_starts == []
    assert lanczos.block_sizes == householder.profile.block_sizes
    assert pairing_error(np.linalg.eigvals(lanczos.t_unitary), np.linalg.eigvals(householder.t)) <= 1e-10


def test_lanczos_path_restarts_on_fourier():
    form = lanczos_reduction(fourier_matrix(32), seed=1)
    assert [seg.size for seg in form.profile.segments] == [4] * 7 + [3, 1]
    assert form.restart_starts == [4, 8, 12, 16, 20, 24, 28, 31]
    assert max(form.report.breakdown_norms) <= 1e-12
    assert unitarity_residual(form.q) <= 100 * 32 * UNIT_ROUNDOFF
