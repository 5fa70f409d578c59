import numpy as np
import pytest

from linalg.errors import DimensionError
from reduction.profile import (
    BLOCK_TRIDIAGONAL,
    CMVProfile,
    Segment,
    infer_profile,
    mask_to_text,
    off_profile_max,
    text_to_mask,
)
from tools.generators import haar_random, direct_sum


def test_uniform_mask_matches_golden_file(data_dir):
    golden = text_to_mask((data_dir / "circulant16_profile.txt").read_text())
    assert np.array_equal(CMVProfile.uniform(16).allowed_mask, golden)


def test_block_tridiagonal_mask_is_wider():
    cmv = CMVProfile.uniform(8)
    bt = cmv.as_kind(BLOCK_TRIDIAGONAL)
    assert np.all(bt.allowed_mask[cmv.allowed_mask])
    assert bt.allowed_mask.sum() > cmv.allowed_mask.sum()
    assert bt.allowed_mask[2, 0] and not cmv.allowed_mask[2, 0]


def test_odd_size_ends_with_single_block():
    profile = CMVProfile.uniform(7)
    assert profile.block_sizes == [2, 2, 2, 1]
    assert len(list(profile.couplings())) == 3


def test_segments_must_tile():
    with pytest.raises(DimensionError):
        CMVProfile.from_segments(6, [Segment(0, (2,)), Segment(3, (2,))])
    with pytest.raises(DimensionError):
        CMVProfile.from_segments(3, [Segment(0, (3,))])


def test_split_cuts_blocks_into_singletons():
    profile = CMVProfile.uniform(6).split(3)
    assert [(s.start, s.block_sizes) for s in profile.segments] == [(0, (2, 1)), (3, (1, 2))]
    assert not profile.allowed_mask[3:, :3].any()


def test_window():
    profile = CMVProfile.uniform(8).split(4)
    sub = profile.window(4, 8)
    assert sub.n == 4
    assert [(s.start, s.block_sizes) for s in sub.segments] == [(0, (2, 2))]
    with pytest.raises(DimensionError):
        profile.window(2, 8)


def test_off_profile_max():
    profile = CMVProfile.uniform(6)
    t = np.zeros((6, 6), dtype=np.complex128)
    t[profile.allowed_mask] = 1.0
    assert off_profile_max(t, profile.allowed_mask) == (0.0, None)
    t[5, 0] = 3e-3
    assert off_profile_max(t, profile.allowed_mask) == (3e-3, (5, 0))


def test_infer_profile_finds_direct_sum():
    t = direct_sum(haar_random(4, 1), haar_random(6, 2))
    profile = infer_profile(t, 1e-12)
    assert profile.segment_starts == [0, 4]


def test_mask_text_round_trip():
    mask = CMVProfile.uniform(5).allowed_mask
    assert np.array_equal(text_to_mask(mask_to_text(mask)), mask)
