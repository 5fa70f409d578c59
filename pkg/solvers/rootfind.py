"""
Polynomial roots as eigenvalues of the companion matrix, written as a
cyclic permutation plus a rank-one correction A = U + z w^H.

U is reduced to CMV-like form with z = e1 as starting vector, which
confines the correction to the first row: B = Q^H A Q = T + e1 v^H.
Shifted QR steps then act on B while T, x and v are carried separately.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from linalg.errors import DimensionError
from linalg.kernels import (
    UNIT_ROUNDOFF,
    GivensRotation,
    as_matrix,
    as_scalar,
    frobenius_norm,
    givens_from_pair,
    two_by_two_eigenvalues,
)
from linalg.matrix_io import complex_list_to_json
from reduction.cmv import unitary_cmv_reduction
from reduction.profile import CMVProfile
from .qr_iter import ShiftStrategy, coupling_is_small, exceptional_shift, guarded_shift

logger = logging.getLogger(__name__)

# blocks whose largest singular value is below this fraction of ||B||_F are
# converging couplings; their sigma_2/sigma_1 ratio is reported as 0
RATIO_FLOOR = 1e-6


@dataclass(frozen=True)
class MonicPolynomial:
    """z^n + a_{n-1} z^{n-1} + ... + a_0, stored as (a_0, ..., a_{n-1})"""
    coefficients: Tuple[complex, ...]

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise DimensionError("polynomial degree must be at least 1")
        object.__setattr__(self, "coefficients", tuple(as_scalar(c) for c in self.coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "MonicPolynomial":
        """Expand prod (z - r) one monomial at a time, in the order given"""
        coeffs = np.array([1.0 + 0j])  # highest degree first
        for r in roots:
            coeffs = np.append(coeffs, 0j) - complex(r) * np.insert(coeffs, 0, 0j)
        return cls(tuple(coeffs[::-1][:-1]))

    @classmethod
    def from_highest_first(cls, values: Sequence[complex]) -> "MonicPolynomial":
        values = [complex(v) for v in values]
        if not values or values[0] != 1:
            raise DimensionError("leading coefficient must be 1")
        return cls(tuple(reversed(values[1:])))

    def __call__(self, z: complex) -> complex:
        acc = 1.0 + 0j
        for a in reversed(self.coefficients):
            acc = acc * z + a
        return acc

    def scaled(self) -> Tuple["MonicPolynomial", float]:
        """
        Geometric-mean scaling z = alpha y with alpha = |a_0|^(1/n).

        Returns:
            (polynomial in y, alpha); roots of self are alpha times its roots
        """
        n = self.degree
        a0 = abs(self.coefficients[0])
        if a0 == 0:
            return self, 1.0
        alpha = a0 ** (1.0 / n)
        return MonicPolynomial(tuple(a * alpha ** (k - n) for k, a in enumerate(self.coefficients))), alpha


def companion_matrix(p: MonicPolynomial) -> np.ndarray:
    """First-row companion matrix: row 0 = (-a_{n-1}, ..., -a_0), ones below the diagonal"""
    n = p.degree
    a = np.zeros((n, n), dtype=np.complex128)
    a[0, :] = [-c for c in reversed(p.coefficients)]
    a[np.arange(1, n), np.arange(n - 1)] = 1.0
    return a


def companion_split(p: MonicPolynomial) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    A = U + z w^H with U the cyclic permutation and z = e1.

    Returns:
        (u, z, w)
    """
    n = p.degree
    if n < 2:
        raise DimensionError("companion_split needs degree >= 2; the root of a linear polynomial is -a0")
    u = np.zeros((n, n), dtype=np.complex128)
    u[np.arange(1, n), np.arange(n - 1)] = 1.0
    u[0, n - 1] = 1.0
    z = np.zeros((n, 1), dtype=np.complex128)
    z[0, 0] = 1.0
    row = np.array([-c for c in reversed(p.coefficients)], dtype=np.complex128)
    row[-1] -= 1.0
    w = np.conj(row).reshape(-1, 1)
    return u, z, w


@dataclass
class PerturbedCMVForm:
    t: np.ndarray
    v: np.ndarray
    profile: CMVProfile
    q: np.ndarray
    x: np.ndarray = None
    residual: float = 0.0

    def __post_init__(self):
        if self.x is None:
            self.x = np.zeros((self.t.shape[0], 1), dtype=np.complex128)
            self.x[0, 0] = 1.0

    def assembled(self) -> np.ndarray:
        return self.t + self.x @ self.v.conj().T


def reduce_companion(p: MonicPolynomial, seed: Optional[int] = None) -> PerturbedCMVForm:
    """Reduce the unitary part with z = e1 and move the correction into row 0"""
    u, z, w = companion_split(p)
    form = unitary_cmv_reduction(u, z=z, seed=seed)
    q = form.q
    beta = complex((q.conj().T @ z)[0, 0])
    v = np.conj(beta) * (q.conj().T @ w)
    perturbed = PerturbedCMVForm(t=form.t, v=v, profile=form.profile, q=q)
    a = u + z @ w.conj().T
    perturbed.residual = frobenius_norm(q.conj().T @ a @ q - perturbed.assembled())
    report = structure_report(perturbed.assembled())
    if report["lower_violation"] > 1e-10 or report["max_sub_ratio"] > 1e-8:
        logger.warning("⚠️ perturbed form off structure: %s", report)
    return perturbed


def structure_report(b: np.ndarray) -> Dict[str, Any]:
    """
    lower_violation   max |b_ij| over i - j > 2, relative to ||B||_F
    sub_ratios        sigma_2/sigma_1 of each subdiagonal 2x2 block
    upper_ratios      sigma_3/sigma_1 of B[0:2s, 2s+2:n] for s >= 1, 2s+2 < n
    """
    n = b.shape[0]
    norm_b = frobenius_norm(b) or 1.0
    lower = np.tril(b, -3)
    sub_ratios = []
    for k in range((n - 2) // 2):
        sigma = np.linalg.svd(b[2 * k + 2:2 * k + 4, 2 * k:2 * k + 2], compute_uv=False)
        sub_ratios.append(0.0 if sigma[0] <= RATIO_FLOOR * norm_b else float(sigma[-1] / sigma[0]))
    upper_ratios = []
    s = 1
    while 2 * s + 2 < n:
        sigma = np.linalg.svd(b[0:2 * s, 2 * s + 2:n], compute_uv=False)
        third = sigma[2] if sigma.size > 2 else 0.0
        upper_ratios.append(0.0 if sigma[0] <= n * UNIT_ROUNDOFF * norm_b else float(third / sigma[0]))
        s += 1
    return {
        "lower_violation": float(np.abs(lower).max(initial=0.0) / norm_b),
        "sub_ratios": sub_ratios,
        "max_sub_ratio": max(sub_ratios, default=0.0),
        "upper_ratios": upper_ratios,
        "max_upper_ratio": max(upper_ratios, default=0.0),
    }


def upper_region_mask(n: int, offset: int = 4) -> np.ndarray:
    """True at (i, j) with j >= 2*(i//2) + offset: the upper part out of the block tridiagonal band"""
    rows = 2 * (np.arange(n) // 2) + offset
    return np.arange(n)[np.newaxis, :] >= rows[:, np.newaxis]


@dataclass
class UpperFactorization:
    """T S = H with S a product of Givens rotations on adjacent columns"""
    h: np.ndarray
    s: np.ndarray
    rotations: List[GivensRotation] = field(repr=False)
    upper_fill: float
    rank_one_ratios: List[float]

    @property
    def max_rank_one_ratio(self) -> float:
        return max(self.rank_one_ratios, default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rotations": len(self.rotations),
            "upper_fill": self.upper_fill,
            "rank_one_ratios": self.rank_one_ratios,
            "max_rank_one_ratio": self.max_rank_one_ratio,
        }


def upper_givens_factor(t: np.ndarray) -> UpperFactorization:
    """
    For j = n-1 down to 5, a rotation on columns (j-1, j) clears column j
    of H over the rows i where (i, j-1) and (i, j) both lie in the upper
    region j >= 2*(i//2) + 4. Each rotation is taken from the largest such
    row, so the whole column is cleared only when the upper region of T has
    rank one; whatever is left beyond column 2*(i//2) + 4 is upper_fill.

    upper_fill        max |h_ij| over j >= 2*(i//2) + 5, relative to ||T||_F
    rank_one_ratios   sigma_2/sigma_1 of T[0:2s, 2s+2:n] for s >= 1, 2s+3 < n
    """
    t = as_matrix(t, "t")
    n = t.shape[0]
    norm_t = frobenius_norm(t) or 1.0
    h = t.copy()
    s = np.eye(n, dtype=np.complex128)
    rotations = []
    for j in range(n - 1, 4, -1):
        rows = np.flatnonzero(2 * (np.arange(n) // 2) + 4 <= j - 1)
        pairs = h[rows, j - 1:j + 1]
        r = int(np.argmax(np.linalg.norm(pairs, axis=1)))
        rot = givens_from_pair(np.conj(pairs[r, 0]), np.conj(pairs[r, 1]), j - 1, j)
        rot.apply_right(h)
        rot.apply_right(s)
        rotations.append(rot)

    fill = np.abs(np.where(upper_region_mask(n, 5), h, 0.0)).max(initial=0.0)
    ratios = []
    k = 1
    while 2 * k + 3 < n:
        sigma = np.linalg.svd(t[0:2 * k, 2 * k + 2:n], compute_uv=False)
        ratios.append(0.0 if sigma[0] <= n * UNIT_ROUNDOFF * norm_t else float(sigma[1] / sigma[0]))
        k += 1
    return UpperFactorization(h=h, s=s, rotations=rotations, upper_fill=float(fill / norm_t), rank_one_ratios=ratios)


def qr_step_perturbed(form: PerturbedCMVForm, shift: ShiftStrategy,
                      window: Optional[Tuple[int, int]] = None) -> Tuple[PerturbedCMVForm, Dict[str, Any]]:
    """
    Shifted QR step on B = T + x v^H restricted to the principal window
    (s, e), embedded in the identity; T, x, v and q are all updated by the
    same similarity.
    """
    b = form.assembled()
    n = b.shape[0]
    s, e = window if window is not None else (0, n)
    bw = b[s:e, s:e]
    size = e - s
    gamma = shift.choose(bw)
    qw, r = np.linalg.qr(bw - gamma * np.eye(size), mode="complete")
    perturbed = False
    if np.abs(np.diagonal(r)).min() < size * UNIT_ROUNDOFF * frobenius_norm(bw):
        gamma = gamma * (1 + 10 * size * UNIT_ROUNDOFF)
        qw, r = np.linalg.qr(bw - gamma * np.eye(size), mode="complete")
        perturbed = True

    step = np.eye(n, dtype=np.complex128)
    step[s:e, s:e] = qw
    stepH = step.conj().T
    fresh = replace(
        form,
        t=stepH @ form.t @ step,
        v=stepH @ form.v,
        x=stepH @ form.x,
        q=form.q @ step,
    )
    report = structure_report(fresh.assembled())
    report.update({"shift": [gamma.real, gamma.imag], "shift_perturbed": perturbed, "window": [s, e]})
    return fresh, report


@dataclass
class RootResult:
    roots: List[complex]
    converged: bool
    steps: int
    reports: List[Dict[str, Any]] = field(default_factory=list, repr=False)
    form: Optional[PerturbedCMVForm] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "converged": self.converged,
            "steps": self.steps,
            "roots": complex_list_to_json(self.roots),
            "max_sub_ratio": max((r["max_sub_ratio"] for r in self.reports), default=0.0),
            "max_upper_ratio": max((r["max_upper_ratio"] for r in self.reports), default=0.0),
        }


def _split_windows(b: np.ndarray, windows: List[Tuple[int, int]], threshold: float) -> List[Tuple[int, int]]:
    out = []
    for s, e in windows:
        for k in range(s + 1, e):
            if coupling_is_small(b, s, k, e, threshold):
                out.append((s, k))
                s = k
        out.append((s, e))
    return out


def roots(p: MonicPolynomial, shift: Optional[ShiftStrategy] = None, max_steps: Optional[int] = None,
          scale: bool = False, seed: Optional[int] = None) -> RootResult:
    """
    All roots of p (with multiplicity).

    Args:
        shift: Wilkinson by default
        max_steps: Config.MAX_STEPS_PER_EIGENVALUE * degree by default
        scale: geometric-mean scaling of the coefficients first
    """
    if p.degree == 1:
        return RootResult(roots=[-p.coefficients[0]], converged=True, steps=0)
    shift = shift or ShiftStrategy.wilkinson()
    max_steps = max_steps if max_steps is not None else Config.MAX_STEPS_PER_EIGENVALUE * p.degree
    alpha = 1.0
    if scale:
        p, alpha = p.scaled()

    form = reduce_companion(p, seed=seed)
    n = p.degree
    windows = [(0, n)]
    steps = 0
    since_split = 0
    reports = []
    converged = True
    while True:
        b = form.assembled()
        refined = _split_windows(b, windows, Config.DEFLATION_SCALE * n * UNIT_ROUNDOFF * frobenius_norm(b))
        if len(refined) > len(windows):
            logger.debug("split at step %d: %s", steps, refined)
            since_split = 0
        windows = refined
        active = [w for w in windows if w[1] - w[0] > 2]
        if not active:
            break
        if steps >= max_steps:
            converged = False
            logger.warning("⚠️ rootfinding stopped after %d steps", steps)
            break
        s, e = active[-1]
        strategy = shift
        if since_split:
            # a zero shift is only kept for one step: it is exact for a root at 0
            strategy = guarded_shift(shift, b[s:e, s:e], steps)
        if since_split and since_split % Config.EXCEPTIONAL_SHIFT_AFTER == 0:
            strategy = ShiftStrategy.custom(exceptional_shift(b[s:e, s:e]))
        form, report = qr_step_perturbed(form, strategy, window=(s, e))
        reports.append(report)
        steps += 1
        since_split += 1

    found: List[complex] = []
    for s, e in windows:
        block = b[s:e, s:e]
        if e - s <= 2:
            found.extend(two_by_two_eigenvalues(block))
        else:
            found.extend(complex(x) for x in np.diagonal(block))
    return RootResult(roots=[alpha * r for r in found], converged=converged, steps=steps, reports=reports, form=form)
