import cmath

import numpy as np
import pytest

from linalg.errors import ProfileError
from linalg.kernels import UNIT_ROUNDOFF, frobenius_norm, unitarity_residual
from reduction.cmv import unitary_cmv_reduction
from reduction.profile import CMVProfile
from solvers.qr_iter import (
    ShiftStrategy,
    deflate,
    eigensolve_unitary,
    exceptional_shift,
    guarded_shift,
    qr_step,
    unimodular_shift,
)
from tools.generators import haar_random

ROOTS_OF_UNITY_16 = [cmath.exp(2j * cmath.pi * k / 16) for k in range(16)]


def test_shift_parsing():
    assert ShiftStrategy.parse("wilkinson").kind == "wilkinson"
    assert ShiftStrategy.parse("Zero").kind == "zero"
    custom = ShiftStrategy.parse("0.5,-1")
    assert custom.kind == "custom" and custom.value == 0.5 - 1j
    with pytest.raises(ValueError):
        ShiftStrategy.parse("fast")


def test_shift_choices():
    t = np.array([[1, 2], [0, 3]], dtype=np.complex128)
    assert ShiftStrategy.zero().choose(t) == 0
    assert ShiftStrategy.rayleigh().choose(t) == 3
    assert ShiftStrategy.wilkinson().choose(t) == pytest.approx(3)


def test_exceptional_shift():
    t = np.array([[0, 0], [2, 1]], dtype=np.complex128)
    assert exceptional_shift(t) == pytest.approx(1 + 1.5 * cmath.exp(0.25j * cmath.pi))


def test_exceptional_shift_reads_the_whole_last_row():
    # CMV shape: the last coupling sits two columns left of the diagonal
    t = np.array([[0, 1, 0], [0, 0, 0], [1, 0, 0]], dtype=np.complex128)
    assert exceptional_shift(t) == pytest.approx(0.75 * cmath.exp(0.25j * cmath.pi))


def test_collapsed_shift_is_replaced():
    nilpotent = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    assert ShiftStrategy.wilkinson().choose(nilpotent) == 0
    strategy = guarded_shift(ShiftStrategy.wilkinson(), nilpotent, 3)
    assert strategy.kind == "custom"
    assert strategy.value == pytest.approx(unimodular_shift(3, 1 / np.sqrt(2)))
    assert guarded_shift(ShiftStrategy.zero(), nilpotent, 3).kind == "zero"
    t = np.array([[1, 2], [0, 3]], dtype=np.complex128)
    assert guarded_shift(ShiftStrategy.wilkinson(), t, 0).kind == "wilkinson"


def test_qr_steps_keep_the_profile(circulant16, pairing_error):
    form = unitary_cmv_reduction(circulant16, seed=1)
    t, profile = form.t, form.profile
    start = np.linalg.eigvals(t)
    for k in range(32):
        thr = 10 * 16 * UNIT_ROUNDOFF * frobenius_norm(t)
        step = qr_step(t, profile, ShiftStrategy.wilkinson(), validate=(k == 0))
        assert step.profile_violation <= thr
        t = step.t_next
        t[~profile.allowed_mask] = 0.0
    assert pairing_error(np.linalg.eigvals(t), start) <= 1e-8


def test_qr_step_rejects_dense_input(haar16):
    with pytest.raises(ProfileError):
        qr_step(haar16, CMVProfile.uniform(16), ShiftStrategy.wilkinson())


def test_deflate_splits_at_zero_coupling(circulant16):
    form = unitary_cmv_reduction(circulant16, seed=1)
    t = form.t.copy()
    t[8:, :8] = 0.0
    result = deflate(t, form.profile, 1e-13)
    assert result.splits == [8]
    assert result.segments == [(0, 8), (8, 16)]
    assert not result.t[:8, 8:].any()
    assert form.t[0:8, 8:].any()


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("n", [5, 8, 16, 32])
def test_unit_circle_spectrum(n, seed, pairing_error):
    u = haar_random(n, 40 + seed)
    form = unitary_cmv_reduction(u, seed=seed)
    result = eigensolve_unitary(form.t, form.profile)
    assert result.converged
    moduli = np.abs(result.eigenvalues)
    assert np.max(np.abs(moduli - 1)) <= 1e-10
    assert pairing_error(result.eigenvalues, np.linalg.eigvals(u)) <= 1e-8


def test_circulant_eigenvalues_are_roots_of_unity(circulant16, pairing_error):
    form = unitary_cmv_reduction(circulant16, seed=1)
    result = eigensolve_unitary(form.t, form.profile)
    assert result.converged
    assert pairing_error(result.eigenvalues, ROOTS_OF_UNITY_16) <= 1e-10
    assert result.to_dict()["steps_total"] == result.steps_total


def test_step_budget_exhausted(haar16):
    form = unitary_cmv_reduction(haar16, seed=1)
    result = eigensolve_unitary(form.t, form.profile, max_steps=0)
    assert not result.converged
    assert len(result.eigenvalues) == 16
    assert result.steps_total == 0


def test_qr_step_preserves_unitarity(haar16):
    form = unitary_cmv_reduction(haar16, seed=2)
    t = form.t
    for _ in range(8):
        t = qr_step(t, form.profile, ShiftStrategy.wilkinson(), validate=False).t_next
        assert unitarity_residual(t) <= 100 * 16 * UNIT_ROUNDOFF


def test_permutation_shaped_form_converges(circulant16, pairing_error):
    e1 = np.eye(16, dtype=np.complex128)[:, :1]
    form = unitary_cmv_reduction(circulant16, z=e1)
    result = eigensolve_unitary(form.t, form.profile)
    assert result.converged
    assert pairing_error(result.eigenvalues, ROOTS_OF_UNITY_16) <= 1e-10


def test_explicit_zero_shift_is_left_alone(circulant16):
    e1 = np.eye(16, dtype=np.complex128)[:, :1]
    form = unitary_cmv_reduction(circulant16, z=e1)
    result = eigensolve_unitary(form.t, form.profile, shift=ShiftStrategy.zero(), max_steps=5)
    assert result.steps_total == 5
