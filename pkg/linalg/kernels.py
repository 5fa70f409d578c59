"""
Dense complex kernels: products, Hermitian splitting, Givens rotations,
thin/full QR, two-column SVD, numerical rank and unitarity checks.

Every matrix is a 2-D numpy complex128 array; `as_matrix` is the single
entry point that admits data and rejects NaN/Inf.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionError, NonFiniteError

logger = logging.getLogger(__name__)

# unit roundoff of IEEE double precision
UNIT_ROUNDOFF = 2.0 ** -53


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Convert to a finite complex128 2-D array (vectors become columns)"""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got {arr.ndim}-D")
    if not np.isfinite(arr).all():
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return arr


def as_scalar(value) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteError(f"scalar {value!r} is not finite")
    return z


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro")) if a.size else 0.0


def _require_square(a: np.ndarray, name: str):
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got {a.shape[0]}x{a.shape[1]}")


@dataclass(frozen=True)
class RankDecision:
    """Singular values (descending) and the rank they imply against `threshold`"""
    numerical_rank: int
    singular_values: Tuple[float, ...]
    threshold: float

    def sigma(self, k: int) -> float:
        """k-th singular value (0-based), zero when the block has fewer"""
        return self.singular_values[k] if k < len(self.singular_values) else 0.0


def _decide_rank(sigma: Sequence[float], scale: Optional[float], dim: int) -> RankDecision:
    values = tuple(sorted((float(abs(s)) for s in sigma), reverse=True))
    if scale is None:
        threshold = dim * UNIT_ROUNDOFF * values[0] if values else 0.0
    else:
        threshold = float(scale)
    rank = sum(1 for s in values if s > threshold)
    return RankDecision(numerical_rank=rank, singular_values=values, threshold=threshold)


@dataclass(frozen=True)
class GivensRotation:
    """
    G = [[c, s], [-conj(s), c]] acting on coordinates (i, j).

    A similarity is t <- G t G^H; the accumulated basis is updated as q <- q G^H.
    """
    c: float
    s: complex
    i: int = 0
    j: int = 1

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("Givens rotation needs two distinct indices")

    def matrix(self) -> np.ndarray:
        return np.array([[self.c, self.s], [-np.conj(self.s), self.c]], dtype=np.complex128)

    def apply_left(self, m: np.ndarray) -> np.ndarray:
        idx = [self.i, self.j]
        m[idx, :] = self.matrix() @ m[idx, :]
        return m

    def apply_right(self, m: np.ndarray) -> np.ndarray:
        """m <- m G^H (in place)"""
        idx = [self.i, self.j]
        m[:, idx] = m[:, idx] @ self.matrix().conj().T
        return m

    def apply_similarity(self, t: np.ndarray) -> np.ndarray:
        self.apply_left(t)
        return self.apply_right(t)

    @property
    def angle_size(self) -> float:
        return abs(self.s)


def givens_from_pair(a, b, i: int = 0, j: int = 1) -> GivensRotation:
    """Rotation with G @ (a, b)^T = (r, 0)^T, |r| = sqrt(|a|^2 + |b|^2)"""
    a = as_scalar(a)
    b = as_scalar(b)
    if b == 0:
        return GivensRotation(1.0, 0j, i, j)
    if a == 0:
        return GivensRotation(0.0, b.conjugate() / abs(b), i, j)
    r = math.hypot(abs(a), abs(b))
    c = abs(a) / r
    s = (a / abs(a)) * b.conjugate() / r
    return GivensRotation(c, s, i, j)


def mat_mul(a, b) -> np.ndarray:
    """
    Dense product with a fixed summation order: column-major accumulation
    of rank-one updates a[:, k] b[k, :] for k = 0, 1, ...
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.complex128)
    for k in range(a.shape[1]):
        out += np.outer(a[:, k], b[k, :])
    return out


def hermitian_part(u) -> np.ndarray:
    """(U + U^H)/2; conjugate pairs are formed from the same two operands so the result is Hermitian bit for bit"""
    u = as_matrix(u, "u")
    _require_square(u, "u")
    return 0.5 * (u + u.conj().T)


def anti_hermitian_part(u) -> np.ndarray:
    u = as_matrix(u, "u")
    _require_square(u, "u")
    return 0.5 * (u - u.conj().T)


def qr_tall(a, full: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Householder QR with a real nonnegative diagonal in R.

    Args:
        a: rows >= cols
        full: return the square unitary factor (and R padded with zero rows)

    Returns:
        (q, r) with q @ r == a up to rounding
    """
    a = as_matrix(a, "a")
    rows, cols = a.shape
    if rows < cols:
        raise DimensionError(f"qr_tall needs rows >= cols, got {rows}x{cols}")
    q, r = np.linalg.qr(a, mode="complete" if full else "reduced")
    if cols == 0:
        return q, r
    d = np.diagonal(r[:cols, :cols]).copy()
    phase = np.ones(cols, dtype=np.complex128)
    nonzero = d != 0
    phase[nonzero] = d[nonzero] / np.abs(d[nonzero])
    q[:, :cols] = q[:, :cols] * phase[np.newaxis, :]
    r[:cols, :] = np.conj(phase)[:, np.newaxis] * r[:cols, :]
    idx = np.arange(cols)
    r[idx, idx] = np.abs(d)
    return q, r


def svd_two_cols(w, scale: Optional[float] = None) -> Tuple[np.ndarray, RankDecision, np.ndarray]:
    """
    SVD of a matrix with at most two columns: thin QR, then the SVD of the
    (at most 2x2) triangular factor.

    Returns:
        (g, decision, v) with w = g @ diag(sigma) @ v^H
    """
    w = as_matrix(w, "w")
    rows, cols = w.shape
    if cols > 2:
        raise DimensionError(f"svd_two_cols takes at most two columns, got {cols}")
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.complex128), _decide_rank((), scale, rows), np.zeros((0, 0))
    g, r = qr_tall(w)
    left, sigma, vh = np.linalg.svd(r)
    decision = _decide_rank(sigma, scale, max(rows, cols))
    return g @ left, decision, vh.conj().T


def numerical_rank_2x2(b, scale: Optional[float] = None) -> RankDecision:
    """Rank decision for a block of size at most 2x2"""
    b = as_matrix(b, "b")
    if b.shape[0] > 2 or b.shape[1] > 2:
        raise DimensionError(f"numerical_rank_2x2 takes at most 2x2, got {b.shape}")
    sigma = np.linalg.svd(b, compute_uv=False) if b.size else ()
    return _decide_rank(sigma, scale, max(b.shape))


def unitarity_residual(q) -> float:
    """||q^H q - I||_F"""
    q = as_matrix(q, "q")
    _require_square(q, "q")
    gram = mat_mul(q.conj().T, q)
    return frobenius_norm(gram - np.eye(q.shape[0]))


def random_unit_vector(n: int, seed) -> np.ndarray:
    """Seeded complex Gaussian vector of unit 2-norm (n x 1); seed is an int or a sequence of ints"""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return (z / np.linalg.norm(z)).reshape(-1, 1)


def two_by_two_eigenvalues(block: np.ndarray) -> Tuple[complex, ...]:
    """Closed-form eigenvalues of a 1x1 or 2x2 block"""
    if block.shape == (1, 1):
        return (complex(block[0, 0]),)
    a, b = block[0, 0], block[0, 1]
    c, d = block[1, 0], block[1, 1]
    half_trace = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    first = half_trace + disc
    second = half_trace - disc
    # the larger root is accurate; recover the other from the determinant
    det = a * d - b * c
    if abs(first) < abs(second):
        first, second = second, first
    if first != 0:
        second = det / first
    return complex(first), complex(second)
