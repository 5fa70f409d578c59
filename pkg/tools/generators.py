"""
Test-matrix generators (Fourier, cyclic permutation, Haar-random unitary,
companion, direct sums) and the `kind:args` spec strings the CLI accepts.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from linalg.errors import FormatError, GeneratorError
from linalg.kernels import qr_tall
from linalg.matrix_io import parse_inline_coefficients
from solvers.rootfind import MonicPolynomial, companion_matrix

logger = logging.getLogger(__name__)

ALIASES = {
    "fourier": "fourier",
    "circulant": "circulant_generator",
    "circulant_generator": "circulant_generator",
    "haar": "haar_random",
    "haar_random": "haar_random",
    "companion": "companion",
    "direct_sum": "direct_sum",
}


@dataclass(frozen=True)
class GeneratorSpec:
    """
    kind: one of fourier, circulant_generator, haar_random, companion, direct_sum
    params: companion -> (a_0, ..., a_{n-1}); direct_sum -> tuple of GeneratorSpec
    """
    kind: str
    n: int
    seed: int = 1
    params: Tuple = ()

    def __post_init__(self):
        if self.kind not in ALIASES.values():
            raise GeneratorError(f"unknown generator kind {self.kind!r}")
        if self.n < 1:
            raise GeneratorError(f"size must be positive, got {self.n}")
        if self.kind == "fourier" and self.n < 2:
            raise GeneratorError("fourier needs n >= 2")


def fourier_matrix(n: int) -> np.ndarray:
    """Unitary DFT: entries w^(jk)/sqrt(n), w = exp(-2 pi i/n)"""
    idx = np.arange(n)
    exponent = np.outer(idx, idx) % n
    return np.exp(-2j * np.pi * exponent / n) / np.sqrt(n)


def circulant_generator(n: int) -> np.ndarray:
    """Cyclic permutation (companion of z^n - 1): U e_k = e_{k+1}, U e_n = e_1"""
    u = np.zeros((n, n), dtype=np.complex128)
    u[np.arange(1, n), np.arange(n - 1)] = 1.0
    u[0, n - 1] = 1.0
    return u


def haar_random(n: int, seed: int) -> np.ndarray:
    """Q factor (phase-fixed R diagonal) of a seeded complex Gaussian matrix"""
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, _ = qr_tall(g)
    return q


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    pos = 0
    for b in blocks:
        k = b.shape[0]
        out[pos:pos + k, pos:pos + k] = b
        pos += k
    return out


def generate(spec: GeneratorSpec) -> np.ndarray:
    if spec.kind == "fourier":
        return fourier_matrix(spec.n)
    if spec.kind == "circulant_generator":
        return circulant_generator(spec.n)
    if spec.kind == "haar_random":
        return haar_random(spec.n, spec.seed)
    if spec.kind == "companion":
        if len(spec.params) != spec.n:
            raise GeneratorError(f"companion of degree {spec.n} needs {spec.n} coefficients")
        return companion_matrix(MonicPolynomial(tuple(spec.params)))
    if not spec.params:
        raise GeneratorError("direct_sum needs at least one part")
    return direct_sum(*(generate(part) for part in spec.params))


def _parse_size(text: str, kind: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise GeneratorError(f"{kind} needs an integer size, got {text!r}")


def parse_generator(text: str, seed: int = 1) -> GeneratorSpec:
    """
    `fourier:N`, `circulant:N`, `haar:N`, `companion:1,c_{n-1},...,c_0`
    or `direct_sum:SPEC+SPEC+...` (part i gets seed + i).
    """
    kind, sep, arg = text.strip().partition(":")
    kind = ALIASES.get(kind.strip().lower())
    if kind is None or not sep:
        raise GeneratorError(f"bad generator spec {text!r}")
    if kind == "direct_sum":
        parts = tuple(parse_generator(p, seed + i) for i, p in enumerate(arg.split("+")) if p.strip())
        if not parts:
            raise GeneratorError("direct_sum needs at least one part")
        return GeneratorSpec(kind, sum(p.n for p in parts), seed, parts)
    if kind == "companion":
        try:
            coeffs = parse_inline_coefficients(arg)
        except FormatError as e:
            raise GeneratorError(str(e))
        return GeneratorSpec(kind, len(coeffs), seed, tuple(coeffs))
    return GeneratorSpec(kind, _parse_size(arg, kind), seed)
