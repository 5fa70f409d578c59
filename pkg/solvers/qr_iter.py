"""
Shifted QR iteration on unitary CMV-like matrices.

A step T1 = R Q + gamma I (with T0 - gamma I = Q R) keeps the CMV shape of T0,
so every step is checked against the profile it started from. The
eigensolver iterates on the trailing undeflated segment, splits off
converged parts and reads the eigenvalues of the final 1x1/2x2 blocks.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import Config
from linalg.errors import DimensionError, ProfileError
from linalg.kernels import UNIT_ROUNDOFF, as_matrix, as_scalar, frobenius_norm, two_by_two_eigenvalues
from linalg.matrix_io import complex_list_to_json
from reduction.cmv import verify_cmv_like
from reduction.profile import CMVProfile, off_profile_max

logger = logging.getLogger(__name__)

SHIFT_KINDS = ("zero", "rayleigh", "wilkinson", "custom")

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
# |shift| below this fraction of the rms row norm counts as collapsed
STALL_SHIFT_TOL = math.sqrt(UNIT_ROUNDOFF)


@dataclass(frozen=True)
class ShiftStrategy:
    kind: str = "wilkinson"
    value: Optional[complex] = None

    def __post_init__(self):
        if self.kind not in SHIFT_KINDS:
            raise ValueError(f"unknown shift kind {self.kind!r}")
        if self.kind == "custom" and self.value is None:
            raise ValueError("custom shift needs a value")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def rayleigh(cls):
        return cls("rayleigh")

    @classmethod
    def wilkinson(cls):
        return cls("wilkinson")

    @classmethod
    def custom(cls, value) -> "ShiftStrategy":
        return cls("custom", as_scalar(value))

    @classmethod
    def parse(cls, text: str) -> "ShiftStrategy":
        """`zero`, `rayleigh`, `wilkinson` or `re,im`"""
        text = text.strip().lower()
        if text in ("zero", "rayleigh", "wilkinson"):
            return cls(text)
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"shift must be zero|rayleigh|wilkinson|re,im, got {text!r}")
        return cls.custom(complex(float(parts[0]), float(parts[1])))

    def choose(self, t: np.ndarray) -> complex:
        if self.kind == "zero":
            return 0j
        if self.kind == "custom":
            return complex(self.value)
        corner = complex(t[-1, -1])
        if self.kind == "rayleigh" or t.shape[0] < 2:
            return corner
        candidates = two_by_two_eigenvalues(t[-2:, -2:])
        return min(candidates, key=lambda lam: abs(lam - corner))


def exceptional_shift(t: np.ndarray) -> complex:
    """
    Trailing diagonal entry pushed off along exp(i pi/4) by 3/4 of the norm
    of the last row's coupling t[-1, :-1] (in CMV shape the last coupling
    need not sit on the subdiagonal)
    """
    sub = float(np.linalg.norm(t[-1, :-1])) if t.shape[0] > 1 else 1.0
    return complex(t[-1, -1]) + 0.75 * sub * cmath.exp(0.25j * cmath.pi)


def unimodular_shift(attempt: int, radius: float = 1.0) -> complex:
    """radius * exp(i k theta), theta the golden angle, k = attempt + 1"""
    return radius * cmath.exp(1j * GOLDEN_ANGLE * (attempt + 1))


def guarded_shift(strategy: ShiftStrategy, t: np.ndarray, attempt: int) -> ShiftStrategy:
    """
    Wilkinson and Rayleigh shifts that collapse to ~0 (nilpotent trailing
    2x2, as on permutation-shaped forms) are replaced by a unimodular shift
    scaled to the rms row norm of t. Zero and custom shifts pass through.
    """
    if strategy.kind not in ("wilkinson", "rayleigh") or t.shape[0] == 0:
        return strategy
    radius = frobenius_norm(t) / math.sqrt(t.shape[0])
    if abs(strategy.choose(t)) > STALL_SHIFT_TOL * radius:
        return strategy
    gamma = unimodular_shift(attempt, radius)
    logger.debug("shift collapsed to zero, using %s", gamma)
    return ShiftStrategy.custom(gamma)


@dataclass
class QRStepResult:
    t_next: np.ndarray
    q_step: np.ndarray
    shift_used: complex
    profile_violation: float
    shift_perturbed: bool = False


def _shifted_qr(t: np.ndarray, gamma: complex) -> Tuple[np.ndarray, np.ndarray]:
    n = t.shape[0]
    return np.linalg.qr(t - gamma * np.eye(n), mode="complete")


def qr_step(t, profile: CMVProfile, shift: ShiftStrategy, validate: bool = True) -> QRStepResult:
    """
    One explicit shifted QR step on the dense matrix.

    Raises:
        ProfileError: validate is on and t is not CMV-like with respect to profile
    """
    t = as_matrix(t, "t")
    n = t.shape[0]
    if t.shape != (profile.n, profile.n):
        raise DimensionError(f"matrix {t.shape} does not match profile of size {profile.n}")
    norm_t = frobenius_norm(t)
    if validate:
        thr = Config.TOL_SCALE * n * UNIT_ROUNDOFF * norm_t
        ok, violations = verify_cmv_like(t, profile, thr, unitarity_tol=100 * n * UNIT_ROUNDOFF)
        if not ok:
            first = violations[0]
            raise ProfileError(first.index or (0, 0), first.value, thr)

    gamma = shift.choose(t)
    q, r = _shifted_qr(t, gamma)
    perturbed = False
    if n and np.abs(np.diagonal(r)).min() < n * UNIT_ROUNDOFF * norm_t:
        gamma = gamma * (1 + 10 * n * UNIT_ROUNDOFF)
        q, r = _shifted_qr(t, gamma)
        perturbed = True
        logger.debug("shift %s nearly singular, perturbed", gamma)

    t_next = r @ q + gamma * np.eye(n)
    violation, _ = off_profile_max(t_next, profile.allowed_mask)
    return QRStepResult(t_next=t_next, q_step=q, shift_used=gamma, profile_violation=violation, shift_perturbed=perturbed)


@dataclass
class DeflationResult:
    t: np.ndarray
    profile: CMVProfile
    splits: List[int] = field(default_factory=list)

    @property
    def segments(self) -> List[Tuple[int, int]]:
        return [(seg.start, seg.end) for seg in self.profile.segments]


def coupling_is_small(t: np.ndarray, s: int, b: int, e: int, threshold: float) -> bool:
    band = t[b:min(b + 3, e), max(s, b - 3):b]
    fro = float(np.linalg.norm(band))
    if fro <= threshold:
        return True
    if fro > threshold * np.sqrt(min(band.shape)):
        return False
    return float(np.linalg.norm(band, 2)) <= threshold


def deflate(t, profile: CMVProfile, threshold: float) -> DeflationResult:
    """
    Split every segment wherever the coupling across an index has 2-norm
    <= threshold; both coupling blocks are zeroed. t is not modified.
    """
    t = as_matrix(t, "t").copy()
    splits = []
    for seg in profile.segments:
        s, e = seg.start, seg.end
        for b in range(s + 1, e):
            if coupling_is_small(t, s, b, e, threshold):
                t[b:e, s:b] = 0.0
                t[s:b, b:e] = 0.0
                splits.append(b)
                s = b
    for b in splits:
        profile = profile.split(b)
    if splits:
        logger.debug("deflated at %s", splits)
    return DeflationResult(t=t, profile=profile, splits=splits)


@dataclass
class EigenResult:
    eigenvalues: List[complex]
    converged: bool
    steps_total: int
    deflations: List[Dict[str, int]] = field(default_factory=list)
    max_profile_violation: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "converged": self.converged,
            "steps_total": self.steps_total,
            "deflations": self.deflations,
            "max_profile_violation": self.max_profile_violation,
            "eigenvalues": complex_list_to_json(self.eigenvalues),
        }


def eigensolve_unitary(t, profile: CMVProfile, shift: Optional[ShiftStrategy] = None,
                       max_steps: Optional[int] = None) -> EigenResult:
    """
    Eigenvalues of a unitary CMV-like matrix.

    Args:
        t: CMV-like matrix
        profile: its profile
        shift: Wilkinson by default
        max_steps: Config.MAX_STEPS_PER_EIGENVALUE * n by default

    Returns:
        EigenResult; when max_steps runs out, converged is False and the
        undeflated segments contribute their diagonal entries
    """
    t = as_matrix(t, "t")
    n = t.shape[0]
    shift = shift or ShiftStrategy.wilkinson()
    max_steps = max_steps if max_steps is not None else Config.MAX_STEPS_PER_EIGENVALUE * n
    norm_t = frobenius_norm(t)
    thr = Config.DEFLATION_SCALE * n * UNIT_ROUNDOFF * norm_t

    ok, violations = verify_cmv_like(t, profile, Config.TOL_SCALE * n * UNIT_ROUNDOFF * norm_t,
                                     unitarity_tol=100 * n * UNIT_ROUNDOFF)
    if not ok:
        first = violations[0]
        raise ProfileError(first.index or (0, 0), first.value, thr)

    state = deflate(t, profile, thr)
    t, profile = state.t, state.profile
    deflations = [{"index": b, "step": 0} for b in state.splits]
    steps = 0
    since_deflation = 0
    max_violation = 0.0
    converged = True

    while True:
        active = [seg for seg in profile.segments if seg.size > 2]
        if not active:
            break
        if steps >= max_steps:
            converged = False
            logger.warning("⚠️ no convergence after %d QR steps (%d segment(s) left)", steps, len(active))
            break
        seg = active[-1]
        s, e = seg.start, seg.end
        window_profile = profile.window(s, e)
        window = t[s:e, s:e]
        strategy = guarded_shift(shift, window, steps)
        if since_deflation and since_deflation % Config.EXCEPTIONAL_SHIFT_AFTER == 0:
            strategy = ShiftStrategy.custom(exceptional_shift(window))
            logger.debug("exceptional shift at step %d", steps)

        result = qr_step(window, window_profile, strategy, validate=False)
        steps += 1
        since_deflation += 1
        max_violation = max(max_violation, result.profile_violation)
        fresh = result.t_next
        fresh[~window_profile.allowed_mask] = 0.0
        t[s:e, s:e] = fresh

        state = deflate(t, profile, thr)
        if state.splits:
            t, profile = state.t, state.profile
            deflations.extend({"index": b, "step": steps} for b in state.splits)
            since_deflation = 0

    eigenvalues: List[complex] = []
    for seg in profile.segments:
        block = t[seg.start:seg.end, seg.start:seg.end]
        if seg.size <= 2:
            eigenvalues.extend(two_by_two_eigenvalues(block))
        else:
            eigenvalues.extend(complex(v) for v in np.diagonal(block))
    return EigenResult(
        eigenvalues=eigenvalues,
        converged=converged,
        steps_total=steps,
        deflations=deflations,
        max_profile_violation=max_violation,
    )
