from .cmv import (
    CMVLikeForm,
    compress_to_profile,
    lanczos_reduction,
    restart_on_breakdown,
    unitary_cmv_reduction,
    verify_cmv_like,
    verify_rank_pattern,
)
from .lanczos import (
    BlockTridiagonalForm,
    PrematureStop,
    block_lanczos,
    offdiag_rank_check,
    verify_simultaneous_reduction,
)
from .profile import CMVProfile, Segment, infer_profile, off_profile_max, profile_from_blocks
from .report import ReductionReport

__all__ = [
    "CMVLikeForm",
    "compress_to_profile",
    "lanczos_reduction",
    "restart_on_breakdown",
    "unitary_cmv_reduction",
    "verify_cmv_like",
    "verify_rank_pattern",
    "BlockTridiagonalForm",
    "PrematureStop",
    "block_lanczos",
    "offdiag_rank_check",
    "verify_simultaneous_reduction",
    "CMVProfile",
    "Segment",
    "infer_profile",
    "off_profile_max",
    "profile_from_blocks",
    "ReductionReport",
]
