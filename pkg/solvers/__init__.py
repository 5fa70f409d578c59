from .qr_iter import EigenResult, QRStepResult, ShiftStrategy, deflate, eigensolve_unitary, qr_step
from .rootfind import (
    MonicPolynomial,
    PerturbedCMVForm,
    RootResult,
    UpperFactorization,
    companion_split,
    qr_step_perturbed,
    reduce_companion,
    roots,
    upper_givens_factor,
)

__all__ = [
    "EigenResult",
    "QRStepResult",
    "ShiftStrategy",
    "deflate",
    "eigensolve_unitary",
    "qr_step",
    "MonicPolynomial",
    "PerturbedCMVForm",
    "RootResult",
    "UpperFactorization",
    "companion_split",
    "qr_step_perturbed",
    "reduce_companion",
    "roots",
    "upper_givens_factor",
]
