from .errors import (
    CMVError,
    DimensionError,
    FormatError,
    GeneratorError,
    NonFiniteError,
    NonUnitaryError,
    ProfileError,
)
from .kernels import (
    UNIT_ROUNDOFF,
    GivensRotation,
    RankDecision,
    anti_hermitian_part,
    as_matrix,
    givens_from_pair,
    hermitian_part,
    mat_mul,
    numerical_rank_2x2,
    qr_tall,
    svd_two_cols,
    unitarity_residual,
)

__all__ = [
    "CMVError",
    "DimensionError",
    "FormatError",
    "GeneratorError",
    "NonFiniteError",
    "NonUnitaryError",
    "ProfileError",
    "UNIT_ROUNDOFF",
    "GivensRotation",
    "RankDecision",
    "anti_hermitian_part",
    "as_matrix",
    "givens_from_pair",
    "hermitian_part",
    "mat_mul",
    "numerical_rank_2x2",
    "qr_tall",
    "svd_two_cols",
    "unitarity_residual",
]
