"""
CMV-like profiles: which entries of a reduced matrix may be nonzero.

A profile is a list of segments (diagonal blocks left by restarts or
deflation); each segment is cut into 2x2 blocks, the last one possibly 1x1.
Two masks are built over that partition:

  block tridiagonal  every entry of adjacent blocks allowed
  cmv                compressed pattern; inside segment-local blocks k, k+1
                     the subdiagonal block keeps only the second column of
                     block k and the superdiagonal block keeps only the first
                     column of block k+1
"""
import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from linalg.errors import DimensionError

logger = logging.getLogger(__name__)

CMV = "cmv"
BLOCK_TRIDIAGONAL = "block_tridiagonal"


def default_block_sizes(size: int) -> Tuple[int, ...]:
    """(2, ..., 2) or (2, ..., 2, 1)"""
    return (2,) * (size // 2) + ((1,) if size % 2 else ())


@dataclass(frozen=True)
class Segment:
    start: int
    block_sizes: Tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.block_sizes)

    @property
    def end(self) -> int:
        return self.start + self.size

    def block_ranges(self) -> List[Tuple[int, int]]:
        ranges = []
        pos = self.start
        for b in self.block_sizes:
            ranges.append((pos, pos + b))
            pos += b
        return ranges

    def to_dict(self):
        return {"start": self.start, "size": self.size, "block_sizes": list(self.block_sizes)}


@dataclass(frozen=True)
class Coupling:
    """Adjacent blocks (k, k+1) of one segment, global half-open ranges"""
    k: int
    upper: Tuple[int, int]
    lower: Tuple[int, int]

    def sub_block(self, t: np.ndarray) -> np.ndarray:
        return t[self.lower[0]:self.lower[1], self.upper[0]:self.upper[1]]

    def super_block(self, t: np.ndarray) -> np.ndarray:
        return t[self.upper[0]:self.upper[1], self.lower[0]:self.lower[1]]


def _build_mask(n: int, segments: Sequence[Segment], kind: str) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    for seg in segments:
        ranges = seg.block_ranges()
        for k, (b0, b1) in enumerate(ranges):
            mask[b0:b1, b0:b1] = True
            if k + 1 == len(ranges):
                continue
            c0, c1 = ranges[k + 1]
            if kind == BLOCK_TRIDIAGONAL:
                mask[c0:c1, b0:b1] = True
                mask[b0:b1, c0:c1] = True
            else:
                mask[c0:c1, b1 - 1] = True
                mask[b0:b1, c0] = True
    return mask


@dataclass
class CMVProfile:
    n: int
    segments: List[Segment]
    allowed_mask: np.ndarray = field(repr=False)
    kind: str = CMV

    @classmethod
    def from_segments(cls, n: int, segments: Sequence[Segment], kind: str = CMV) -> "CMVProfile":
        segments = sorted(segments, key=lambda s: s.start)
        pos = 0
        for seg in segments:
            if seg.start != pos or seg.size == 0:
                raise DimensionError(f"segments do not tile 0..{n}: gap or overlap at {seg.start}")
            if any(b not in (1, 2) for b in seg.block_sizes):
                raise DimensionError(f"block sizes must be 1 or 2, got {seg.block_sizes}")
            pos = seg.end
        if pos != n:
            raise DimensionError(f"segments cover {pos} of {n} indices")
        return cls(n=n, segments=list(segments), allowed_mask=_build_mask(n, segments, kind), kind=kind)

    @classmethod
    def uniform(cls, n: int, kind: str = CMV) -> "CMVProfile":
        """One segment of 2x2 blocks"""
        return cls.from_segments(n, [Segment(0, default_block_sizes(n))], kind)

    @classmethod
    def from_boundaries(cls, n: int, starts: Sequence[int], kind: str = CMV) -> "CMVProfile":
        """Segments starting at `starts`, each with default block sizes"""
        bounds = sorted(set(starts) | {0})
        bounds.append(n)
        segments = [Segment(s, default_block_sizes(e - s)) for s, e in zip(bounds, bounds[1:]) if e > s]
        return cls.from_segments(n, segments, kind)

    @property
    def block_sizes(self) -> List[int]:
        return [b for seg in self.segments for b in seg.block_sizes]

    @property
    def segment_starts(self) -> List[int]:
        return [seg.start for seg in self.segments]

    def as_kind(self, kind: str) -> "CMVProfile":
        return CMVProfile.from_segments(self.n, self.segments, kind)

    def couplings(self) -> Iterator[Coupling]:
        for seg in self.segments:
            ranges = seg.block_ranges()
            for k in range(len(ranges) - 1):
                yield Coupling(k, ranges[k], ranges[k + 1])

    def split(self, boundary: int) -> "CMVProfile":
        """Profile with an extra segment boundary at `boundary`"""
        starts = set(self.segment_starts) | {boundary}
        segments = []
        for seg in self.segments:
            cut = [b for b in sorted(starts) if seg.start < b < seg.end]
            pieces = [seg.start] + cut + [seg.end]
            if not cut:
                segments.append(seg)
                continue
            for s, e in zip(pieces, pieces[1:]):
                segments.append(Segment(s, _sizes_between(seg, s, e)))
        return CMVProfile.from_segments(self.n, segments, self.kind)

    def window(self, start: int, end: int) -> "CMVProfile":
        """Profile of the principal submatrix start:end (must align with segments)"""
        segments = []
        for seg in self.segments:
            if seg.end <= start or seg.start >= end:
                continue
            if seg.start < start or seg.end > end:
                raise DimensionError(f"window {start}:{end} cuts segment at {seg.start}")
            segments.append(Segment(seg.start - start, seg.block_sizes))
        return CMVProfile.from_segments(end - start, segments, self.kind)

    def to_dict(self):
        return {
            "n": self.n,
            "kind": self.kind,
            "segments": [seg.to_dict() for seg in self.segments],
        }


def _sizes_between(seg: Segment, start: int, end: int) -> Tuple[int, ...]:
    """Block sizes of seg restricted to start:end; a block cut in half leaves two 1x1 blocks"""
    sizes = []
    for b0, b1 in seg.block_ranges():
        lo, hi = max(b0, start), min(b1, end)
        if hi > lo:
            sizes.append(hi - lo)
    return tuple(sizes)


def profile_from_blocks(n: int, block_sizes: Sequence[int], segment_starts: Optional[Sequence[int]] = None,
                        kind: str = CMV) -> CMVProfile:
    """Cut a flat block-size list into segments at `segment_starts`"""
    starts = set(segment_starts or [0]) | {0}
    segments = []
    current: List[int] = []
    seg_start = 0
    pos = 0
    for b in block_sizes:
        if pos in starts and current:
            segments.append(Segment(seg_start, tuple(current)))
            current, seg_start = [], pos
        current.append(int(b))
        pos += b
    if current:
        segments.append(Segment(seg_start, tuple(current)))
    return CMVProfile.from_segments(n, segments, kind)


def off_profile_max(t: np.ndarray, mask: np.ndarray) -> Tuple[float, Optional[Tuple[int, int]]]:
    """Largest |t_ij| over entries the mask forbids, with its index"""
    if t.shape != mask.shape:
        raise DimensionError(f"matrix {t.shape} and mask {mask.shape} differ")
    outside = np.where(mask, 0.0, np.abs(t))
    if outside.size == 0:
        return 0.0, None
    flat = int(np.argmax(outside))
    value = float(outside.flat[flat])
    if value == 0.0:
        return 0.0, None
    return value, (flat // t.shape[1], flat % t.shape[1])


def infer_profile(t: np.ndarray, threshold: float, kind: str = CMV) -> CMVProfile:
    """
    Profile read off a matrix: 2x2 blocks from each segment start, a new
    segment wherever both couplings across a block boundary are below
    threshold.
    """
    n = t.shape[0]
    if t.shape != (n, n):
        raise DimensionError(f"infer_profile needs a square matrix, got {t.shape}")
    starts = [0]
    pos = 2
    while pos < n:
        s = starts[-1]
        lower = np.abs(t[pos:, s:pos]).max(initial=0.0)
        upper = np.abs(t[s:pos, pos:]).max(initial=0.0)
        if lower <= threshold and upper <= threshold:
            starts.append(pos)
        pos += 2
    return CMVProfile.from_boundaries(n, starts, kind)


def mask_to_text(mask: np.ndarray) -> str:
    return "\n".join("".join("x" if v else "." for v in row) for row in mask) + "\n"


def text_to_mask(text: str) -> np.ndarray:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    return np.array([[c == "x" for c in row] for row in rows], dtype=bool)
