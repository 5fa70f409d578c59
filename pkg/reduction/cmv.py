"""
Householder-style reduction of a unitary matrix to CMV-like form.

Each segment starts from D0 = [z | Uz]; the Hermitian part U + U^H is then
swept column block by column block with 3x2 windows whose QR factors are
applied two-sidedly to U itself. A vanishing coupling ends the segment,
the coupling is zeroed and a fresh starting vector is picked for the
trailing coordinates. Givens rotations finally compress every rank-one
coupling block to the CMV zero pattern.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from linalg.errors import DimensionError, NonUnitaryError, ProfileError
from linalg.kernels import (
    UNIT_ROUNDOFF,
    GivensRotation,
    as_matrix,
    frobenius_norm,
    givens_from_pair,
    hermitian_part,
    numerical_rank_2x2,
    qr_tall,
    random_unit_vector,
    svd_two_cols,
    unitarity_residual,
)
from .profile import CMV, BLOCK_TRIDIAGONAL, CMVProfile, Segment, off_profile_max, profile_from_blocks
from .lanczos import BlockTridiagonalForm, PrematureStop, block_lanczos
from .report import ReductionReport, deflation_threshold

logger = logging.getLogger(__name__)


@dataclass
class CMVLikeForm:
    q: np.ndarray
    t: np.ndarray
    profile: CMVProfile
    report: ReductionReport
    rotations: List[GivensRotation] = field(default_factory=list, repr=False)

    @property
    def restart_starts(self) -> List[int]:
        return [seg.start for seg in self.profile.segments[1:]]


@dataclass
class RestartDecision:
    """Where a segment ended and how the next one starts"""
    boundary: int
    breakdown_norm: float
    upper_norm: float
    z: np.ndarray
    candidate: str
    rank: int


@dataclass
class Violation:
    kind: str
    index: Optional[Tuple[int, int]]
    value: float

    def to_dict(self):
        return {"kind": self.kind, "index": list(self.index) if self.index else None, "value": self.value}


def _apply_trailing(t: np.ndarray, q: np.ndarray, start: int, g: np.ndarray):
    t[start:, :] = g.conj().T @ t[start:, :]
    t[:, start:] = t[:, start:] @ g
    q[:, start:] = q[:, start:] @ g


def _pick_restart_vector(sub: np.ndarray, threshold: float, seed, boundary: int, retries: int) -> Tuple[np.ndarray, str, int]:
    m = sub.shape[0]
    if m == 1:
        return np.ones((1, 1), dtype=np.complex128), "e0", 1
    candidates = [(f"seed:{attempt}", random_unit_vector(m, [seed, boundary, attempt])) for attempt in range(retries + 1)]
    for k in range(m):
        e = np.zeros((m, 1), dtype=np.complex128)
        e[k, 0] = 1.0
        candidates.append((f"e{k}", e))
    for label, z in candidates:
        _, decision, _ = svd_two_cols(np.hstack([z, sub @ z]), scale=threshold)
        if decision.numerical_rank == 2:
            return z, label, 2
    logger.debug("no rank-two start on %d trailing coordinates; 1x1 segment", m)
    label, z = candidates[0]
    return z, label, 1


def _coupling_mask(n: int, boundary: int) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    mask[boundary:, :boundary] = True
    mask[:boundary, boundary:] = True
    return mask


def restart_on_breakdown(t: np.ndarray, boundary: int, start: int, threshold: float,
                         seed=None, retries: Optional[int] = None) -> RestartDecision:
    """
    Zero the couplings across `boundary` (in place) and choose the starting
    vector of the next segment on the trailing coordinates.

    Candidates: seeded vectors (entropy seed, boundary, attempt) for
    attempt = 0..retries, then coordinate vectors; the first whose
    [z | Uz] has rank two wins, otherwise the next segment is 1x1.

    Raises:
        ProfileError: a coupling block across `boundary` has 2-norm above
            threshold (t is left untouched)
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    retries = Config.RESTART_RETRIES if retries is None else retries
    lower = t[boundary:, start:boundary]
    upper = t[start:boundary, boundary:]
    lower_norm = float(np.linalg.norm(lower, 2)) if lower.size else 0.0
    upper_norm = float(np.linalg.norm(upper, 2)) if upper.size else 0.0
    if max(lower_norm, upper_norm) > threshold:
        coupling = np.abs(np.where(_coupling_mask(t.shape[0], boundary), t, 0.0))
        i, j = np.unravel_index(int(np.argmax(coupling)), coupling.shape)
        raise ProfileError((int(i), int(j)), float(coupling[i, j]), threshold)
    t[boundary:, :boundary] = 0.0
    t[:boundary, boundary:] = 0.0

    z, label, rank = _pick_restart_vector(t[boundary:, boundary:], threshold, seed, boundary, retries)
    logger.info("restart at %d: breakdown norm %.3e, start vector %s", boundary, lower_norm, label)
    return RestartDecision(boundary, lower_norm, upper_norm, z, label, rank)


def _reduce_segment(t: np.ndarray, q: np.ndarray, start: int, z: np.ndarray, threshold: float) -> Tuple[int, Tuple[int, ...], int]:
    """Returns (segment end, block sizes, number of 3x2 windows applied)"""
    n = t.shape[0]
    if n - start == 1:
        return n, (1,), 0

    d0 = np.hstack([z, t[start:, start:] @ z])
    _, decision, _ = svd_two_cols(d0, scale=threshold)
    if decision.numerical_rank < 2:
        g, _ = qr_tall(z, full=True)
        _apply_trailing(t, q, start, g)
        return start + 1, (1,), 0
    g, _ = qr_tall(d0, full=True)
    _apply_trailing(t, q, start, g)

    blocks = [2]
    windows = 0
    b0 = start
    while True:
        r0 = b0 + 2
        if r0 >= n:
            return n, tuple(blocks), windows
        for j in range(n - 1, r0 + 1, -1):
            rows = slice(j - 2, j + 1)
            us = t[rows, b0:b0 + 2] + t[b0:b0 + 2, rows].conj().T
            qs, _ = qr_tall(us, full=True)
            t[rows, :] = qs.conj().T @ t[rows, :]
            t[:, rows] = t[:, rows] @ qs
            q[:, rows] = q[:, rows] @ qs
            windows += 1

        avail = min(2, n - r0)
        h = t[r0:r0 + avail, b0:b0 + 2] + t[b0:b0 + 2, r0:r0 + avail].conj().T
        rank = numerical_rank_2x2(h, scale=threshold).numerical_rank
        if rank == 0:
            return r0, tuple(blocks), windows
        if avail == 1:
            blocks.append(1)
            return n, tuple(blocks), windows
        if rank == 1:
            # odd-sized invariant subspace: keep the coupling in row r0 only
            left = np.linalg.svd(h)[0][:, 0]
            rot = givens_from_pair(left[0], left[1], r0, r0 + 1)
            rot.apply_similarity(t)
            rot.apply_right(q)
            blocks.append(1)
            return r0 + 1, tuple(blocks), windows
        blocks.append(2)
        b0 = r0


def _dominant_row(block: np.ndarray, threshold: float) -> Optional[np.ndarray]:
    norms = np.linalg.norm(block, axis=1)
    r = int(np.argmax(norms))
    if norms[r] <= threshold:
        return None
    return np.conj(block[r, :])


def compress_to_profile(t, block_sizes, segment_starts: Optional[Sequence[int]] = None,
                        threshold: Optional[float] = None) -> Tuple[np.ndarray, List[GivensRotation], CMVProfile]:
    """
    Givens compression of a unitary block tridiagonal matrix with rank-one
    couplings to the CMV pattern.

    Per segment: a rotation on block 0 clears the first column of the
    subdiagonal block, then for k >= 1 a rotation on block k clears the
    second column of the superdiagonal block above it. Remaining
    off-pattern entries must be below threshold and are set to zero.

    Args:
        t: matrix to compress (not modified)
        block_sizes: flat list of block sizes, or a CMVProfile
        segment_starts: segment boundaries (ignored for a CMVProfile)
        threshold: DEFLATION_SCALE * n * u * ||t||_F by default

    Returns:
        (compressed t, rotations in application order, CMV profile)

    Raises:
        ProfileError: an off-pattern entry exceeds threshold
    """
    t = as_matrix(t, "t").copy()
    n = t.shape[0]
    if isinstance(block_sizes, CMVProfile):
        profile = block_sizes.as_kind(CMV)
    else:
        profile = profile_from_blocks(n, block_sizes, segment_starts)
    thr = threshold if threshold is not None else deflation_threshold(n, frobenius_norm(t), Config.DEFLATION_SCALE)

    rotations = []
    for seg in profile.segments:
        ranges = seg.block_ranges()
        for k, (b0, b1) in enumerate(ranges):
            if b1 - b0 != 2:
                continue
            if k == 0:
                if len(ranges) < 2:
                    continue
                c0, c1 = ranges[1]
                y = _dominant_row(t[c0:c1, b0:b1], thr)
                if y is None:
                    continue
                swapped = givens_from_pair(y[1], y[0])
                rot = GivensRotation(swapped.c, -np.conj(swapped.s), b0, b0 + 1)
            else:
                p0, p1 = ranges[k - 1]
                y = _dominant_row(t[p0:p1, b0:b1], thr)
                if y is None:
                    continue
                rot = givens_from_pair(y[0], y[1], b0, b0 + 1)
            rot.apply_similarity(t)
            rotations.append(rot)

    value, index = off_profile_max(t, profile.allowed_mask)
    if value > thr:
        raise ProfileError(index, value, thr)
    t[~profile.allowed_mask] = 0.0
    return t, rotations, profile


def _checked_input(u, z, seed: int, caller: str) -> Tuple[np.ndarray, np.ndarray]:
    u = as_matrix(u, "u")
    n = u.shape[0]
    if u.shape != (n, n) or n == 0:
        raise DimensionError(f"{caller} needs a nonempty square matrix, got {u.shape}")
    residual = unitarity_residual(u)
    tolerance = 100 * n * UNIT_ROUNDOFF
    if residual > tolerance:
        raise NonUnitaryError(residual, tolerance)
    if z is None:
        return u, random_unit_vector(n, seed)
    z = as_matrix(z, "z")
    if z.shape != (n, 1):
        raise DimensionError(f"z must be {n} x 1, got {z.shape}")
    if not np.any(z):
        raise DimensionError("starting vector z must be nonzero")
    return u, z


def unitary_cmv_reduction(u, z=None, seed: Optional[int] = None, scale: Optional[float] = None) -> CMVLikeForm:
    """
    Reduce a unitary matrix to a direct sum of CMV-like segments.

    Args:
        u: unitary n x n matrix (residual <= 100 * n * u)
        z: starting vector; seeded random unit vector when omitted
        seed: seed for the starting vector and restart candidates (Config.DEFAULT_SEED)
        scale: threshold factor (Config.DEFLATION_SCALE)

    Returns:
        CMVLikeForm with q^H u q = t
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    u, z = _checked_input(u, z, seed, "unitary_cmv_reduction")
    n = u.shape[0]

    norm_u = frobenius_norm(u)
    thr = deflation_threshold(n, norm_u, scale if scale is not None else Config.DEFLATION_SCALE)
    t = u.copy()
    q = np.eye(n, dtype=np.complex128)
    segments: List[Segment] = []
    norms: List[float] = []
    windows = 0
    start = 0
    while True:
        end, blocks, used = _reduce_segment(t, q, start, z, thr)
        windows += used
        segments.append(Segment(start, blocks))
        if end >= n:
            break
        decision = restart_on_breakdown(t, end, start, thr, seed=seed)
        norms.append(decision.breakdown_norm)
        z = decision.z
        start = end

    profile = CMVProfile.from_segments(n, segments)
    t, rotations, profile = compress_to_profile(t, profile, threshold=thr)
    for rot in rotations:
        rot.apply_right(q)

    report = ReductionReport(
        n=n,
        residual=frobenius_norm(q.conj().T @ u @ q - t),
        unitarity=unitarity_residual(q),
        deflation_threshold=thr,
        breakdown_norms=norms,
        steps=windows,
        segments=[seg.to_dict() for seg in profile.segments],
    )
    logger.info("✅ CMV reduction: n=%d, %d segment(s), residual %.3e", n, len(segments), report.residual)
    return CMVLikeForm(q=q, t=t, profile=profile, report=report, rotations=rotations)


def lanczos_reduction(u, z=None, seed: Optional[int] = None, scale: Optional[float] = None) -> BlockTridiagonalForm:
    """
    Block Lanczos path to a direct sum of block tridiagonal segments.

    A premature stop closes the segment; the run goes on over the orthogonal
    complement of the basis built so far, from the start vector chosen by
    the same candidate policy as restart_on_breakdown.

    Returns:
        BlockTridiagonalForm with t = Q^H U_H Q (zero across segments),
        t_unitary = Q^H U Q and the segment boundaries in restart_starts
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    u, z = _checked_input(u, z, seed, "lanczos_reduction")
    n = u.shape[0]
    u_h = hermitian_part(u)
    thr = deflation_threshold(n, frobenius_norm(u), scale if scale is not None else Config.DEFLATION_SCALE)

    basis = np.zeros((n, 0), dtype=np.complex128)
    block_sizes: List[int] = []
    starts: List[int] = []
    steps = 0
    while basis.shape[1] < n:
        done = basis.shape[1]
        comp = qr_tall(basis, full=True)[0][:, done:] if done else np.eye(n, dtype=np.complex128)
        sub_u = comp.conj().T @ u @ comp
        if done:
            starts.append(done)
            z, label, _ = _pick_restart_vector(sub_u, thr, seed, done, Config.RESTART_RETRIES)
            logger.info("lanczos restart at %d, start vector %s", done, label)
        if n - done == 1:
            basis = np.hstack([basis, comp])
            block_sizes.append(1)
            break
        result = block_lanczos(comp.conj().T @ u_h @ comp, z, sub_u, scale=thr)
        basis = np.hstack([basis, comp @ result.q])
        block_sizes.extend(result.block_sizes)
        if isinstance(result, PrematureStop):
            steps += result.breakdown_step
        else:
            steps += result.report.steps

    q = basis
    profile = profile_from_blocks(n, block_sizes, starts, BLOCK_TRIDIAGONAL)
    t_full = q.conj().T @ u_h @ q
    t = np.where(profile.allowed_mask, t_full, 0.0)
    t_unitary = q.conj().T @ u @ q
    report = ReductionReport(
        n=n,
        residual=frobenius_norm(t_full - t),
        unitarity=unitarity_residual(q),
        deflation_threshold=thr,
        breakdown_norms=[float(np.linalg.norm(t_unitary[b:, :b], 2)) for b in starts],
        steps=steps,
        segments=[seg.to_dict() for seg in profile.segments],
    )
    logger.info("✅ Lanczos reduction: n=%d, %d restart(s), residual %.3e", n, len(starts), report.residual)
    return BlockTridiagonalForm(q=q, t=t, block_sizes=block_sizes, report=report,
                                t_unitary=t_unitary, restart_starts=starts)


def verify_cmv_like(t, profile: CMVProfile, threshold: float,
                    unitarity_tol: Optional[float] = None) -> Tuple[bool, List[Violation]]:
    """
    Off-profile entries, sigma_2 of every coupling block and unitarity.

    Returns:
        (ok, violations); an off-profile or rank violation carries the
        (row, col) of the entry or of the block's top-left corner
    """
    t = as_matrix(t, "t")
    n = t.shape[0]
    if t.shape != (profile.n, profile.n):
        raise DimensionError(f"matrix {t.shape} does not match profile of size {profile.n}")
    tol = unitarity_tol if unitarity_tol is not None else 10 * n * UNIT_ROUNDOFF
    violations = []

    outside = np.abs(np.where(profile.allowed_mask, 0.0, t))
    for i, j in np.argwhere(outside > threshold):
        violations.append(Violation("off_profile", (int(i), int(j)), float(outside[i, j])))

    for coupling in profile.couplings():
        for corner, block in (
            ((coupling.lower[0], coupling.upper[0]), coupling.sub_block(t)),
            ((coupling.upper[0], coupling.lower[0]), coupling.super_block(t)),
        ):
            decision = numerical_rank_2x2(block, scale=threshold)
            if decision.sigma(1) > threshold:
                violations.append(Violation("rank", corner, decision.sigma(1)))

    residual = unitarity_residual(t)
    if residual > tol:
        violations.append(Violation("unitarity", None, residual))
    return not violations, violations


def verify_rank_pattern(t, threshold: float) -> Tuple[bool, List[dict]]:
    """
    Numerical rank one of t[2k:2k+2, 2k-1:2k+1] for 1 <= k <= n/2 - 2.

    Indices where t[2k:2k+2, 2k-1] is not above threshold are skipped.
    """
    t = as_matrix(t, "t")
    n = t.shape[0]
    reports = []
    for k in range(1, n // 2 - 1):
        block = t[2 * k:2 * k + 2, 2 * k - 1:2 * k + 1]
        hypothesis = float(np.linalg.norm(t[2 * k:2 * k + 2, 2 * k - 1]))
        decision = numerical_rank_2x2(block, scale=threshold)
        if hypothesis <= threshold:
            status = "skipped"
        elif decision.sigma(1) <= threshold < decision.sigma(0):
            status = "pass"
        else:
            status = "fail"
        reports.append({
            "k": k,
            "sigma1": decision.sigma(0),
            "sigma2": decision.sigma(1),
            "status": status,
        })
    ok = all(r["status"] != "fail" for r in reports)
    return ok, reports
