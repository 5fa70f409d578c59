"""
Block Lanczos on the Hermitian part of a unitary matrix, started from
D0 = [z | Uz].

The three-term recurrence is followed step by step; every new block gets
one extra full re-orthogonalization against the basis built so far.
A vanishing candidate block ends the run with a PrematureStop result.
"""
import dataclasses
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from config import Config
from linalg.errors import DimensionError
from linalg.kernels import (
    RankDecision,
    as_matrix,
    frobenius_norm,
    numerical_rank_2x2,
    qr_tall,
    svd_two_cols,
    unitarity_residual,
)
from .profile import BLOCK_TRIDIAGONAL, CMVProfile, Segment, off_profile_max, profile_from_blocks
from .report import ReductionReport, deflation_threshold

logger = logging.getLogger(__name__)


@dataclass
class BlockTridiagonalForm:
    q: np.ndarray
    t: np.ndarray
    block_sizes: List[int]
    report: ReductionReport
    t_unitary: np.ndarray = field(repr=False)
    restart_starts: List[int] = field(default_factory=list)

    @property
    def profile(self) -> CMVProfile:
        """Block tridiagonal profile, cut into segments at restart_starts"""
        return profile_from_blocks(self.t.shape[0], self.block_sizes, self.restart_starts, BLOCK_TRIDIAGONAL)


@dataclass
class PrematureStop:
    """The candidate block lost all rank before the basis reached n columns"""
    q: np.ndarray
    t: np.ndarray
    block_sizes: List[int]
    breakdown_step: int
    singular_values: Tuple[float, ...]
    threshold: float

    @property
    def size(self) -> int:
        return self.q.shape[1]


def _project_out(w: np.ndarray, basis: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return w
    return w - basis @ (basis.conj().T @ w)


def block_lanczos(u_h, z, u, scale: Optional[float] = None) -> Union[BlockTridiagonalForm, PrematureStop]:
    """
    Hermitian block tridiagonal reduction T_H = Q^H U_H Q.

    Args:
        u_h: Hermitian part of u
        z: starting vector (n x 1), nonzero
        u: the unitary matrix itself, used for D0 = [z | Uz]
        scale: rank threshold for every block; DEFLATION_SCALE * n * u * ||U||_F by default

    Returns:
        BlockTridiagonalForm, or PrematureStop when a candidate block vanishes
    """
    u = as_matrix(u, "u")
    u_h = as_matrix(u_h, "u_h")
    z = as_matrix(z, "z")
    n = u.shape[0]
    if u.shape != (n, n) or u_h.shape != (n, n) or z.shape != (n, 1):
        raise DimensionError(f"block_lanczos needs n x n matrices and an n x 1 vector, got {u.shape}, {z.shape}")
    if n < 2:
        raise DimensionError("block_lanczos needs n >= 2")
    if not np.any(z):
        raise DimensionError("starting vector z must be nonzero")

    norm_u = frobenius_norm(u)
    thr = scale if scale is not None else deflation_threshold(n, norm_u, Config.DEFLATION_SCALE)

    g, decision, _ = svd_two_cols(np.hstack([z, u @ z]), scale=thr)
    s = max(decision.numerical_rank, 1)
    q = np.zeros((n, n), dtype=np.complex128)
    t = np.zeros((n, n), dtype=np.complex128)
    q[:, :s] = g[:, :s]
    block_sizes = [s]
    s0, s1 = 0, s
    p0 = p1 = None
    step = 0

    while s1 < n:
        step += 1
        cur = q[:, s0:s1]
        w = u_h @ cur
        t[s0:s1, s0:s1] = cur.conj().T @ w
        w = w - cur @ t[s0:s1, s0:s1]
        if p0 is not None:
            w = w - q[:, p0:p1] @ t[p0:p1, s0:s1]
        w = _project_out(w, q[:, :s1])

        g, decision, v = svd_two_cols(w, scale=thr)
        snew = min(decision.numerical_rank, n - s1)
        if snew == 0:
            logger.info("premature stop at step %d (sigma=%s)", step, decision.singular_values)
            return PrematureStop(
                q=q[:, :s1].copy(),
                t=t[:s1, :s1].copy(),
                block_sizes=block_sizes,
                breakdown_step=step,
                singular_values=decision.singular_values,
                threshold=thr,
            )

        sigma = np.array(decision.singular_values[:snew])
        coupling = sigma[:, np.newaxis] * v[:, :snew].conj().T
        fresh, r = qr_tall(_project_out(g[:, :snew], q[:, :s1]))
        coupling = r @ coupling

        q[:, s1:s1 + snew] = fresh
        t[s1:s1 + snew, s0:s1] = coupling
        t[s0:s1, s1:s1 + snew] = coupling.conj().T
        p0, p1 = s0, s1
        s0, s1 = s1, s1 + snew
        block_sizes.append(snew)

    last = q[:, s0:s1]
    t[s0:s1, s0:s1] = last.conj().T @ u_h @ last

    report = ReductionReport(
        n=n,
        residual=frobenius_norm(q.conj().T @ u_h @ q - t),
        unitarity=unitarity_residual(q),
        deflation_threshold=thr,
        steps=step,
        segments=[Segment(0, tuple(block_sizes)).to_dict()],
    )
    logger.debug("block lanczos finished: blocks=%s residual=%.3e", block_sizes, report.residual)
    return BlockTridiagonalForm(
        q=q, t=t, block_sizes=block_sizes, report=report, t_unitary=q.conj().T @ u @ q
    )


def verify_simultaneous_reduction(form: BlockTridiagonalForm, u, tol_scale: float = 10.0) -> ReductionReport:
    """
    Off-profile maxima of Q^H U_H Q, Q^H U_AH Q and Q^H U Q with respect to
    the block tridiagonal profile; passes when all are <= tol_scale * n * u * ||U||_F.
    """
    u = as_matrix(u, "u")
    n = u.shape[0]
    q = form.q
    mask = form.profile.allowed_mask
    t_ah = q.conj().T @ (0.5 * (u - u.conj().T)) @ q
    t_full = q.conj().T @ u @ q
    bound = deflation_threshold(n, frobenius_norm(u), tol_scale)
    checks = {
        "off_profile_hermitian": off_profile_max(form.t, mask)[0],
        "off_profile_anti_hermitian": off_profile_max(t_ah, mask)[0],
        "off_profile_unitary": off_profile_max(t_full, mask)[0],
        "bound": bound,
    }
    checks["passed"] = float(all(checks[k] <= bound for k in checks if k.startswith("off_profile")))
    return dataclasses.replace(form.report, checks={**form.report.checks, **checks})


def offdiag_rank_check(form: BlockTridiagonalForm, scale: float, which: str = "unitary") -> List[RankDecision]:
    """
    Rank decisions for every sub- and superdiagonal block (sub first, then
    super, for each block pair) of T = Q^H U Q, or of T_H with which="hermitian".
    """
    if which not in ("unitary", "hermitian"):
        raise ValueError(f"which must be 'unitary' or 'hermitian', got {which!r}")
    t = form.t_unitary if which == "unitary" else form.t
    decisions = []
    for coupling in form.profile.couplings():
        decisions.append(numerical_rank_2x2(coupling.sub_block(t), scale=scale))
        decisions.append(numerical_rank_2x2(coupling.super_block(t), scale=scale))
    return decisions
