"""
Spy images: zero/nonzero masks rendered as text (`x` / `.`) or binary PGM
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from config import Config
from linalg.kernels import UNIT_ROUNDOFF, as_matrix, frobenius_norm

FORMATS = ("text", "pgm")


@dataclass
class SpyImage:
    threshold: float
    grid: np.ndarray  # True where |t_ij| > threshold

    @property
    def n(self) -> int:
        return self.grid.shape[0]

    def to_text(self) -> str:
        return "\n".join("".join("x" if v else "." for v in row) for row in self.grid) + "\n"

    def to_pgm(self) -> bytes:
        rows, cols = self.grid.shape
        pixels = np.where(self.grid, 0, 255).astype(np.uint8)
        return f"P5\n{cols} {rows}\n255\n".encode("ascii") + pixels.tobytes()


def default_threshold(t: np.ndarray, tol_scale: Optional[float] = None) -> float:
    """tol_scale * n * u * ||t||_F"""
    scale = Config.TOL_SCALE if tol_scale is None else tol_scale
    return scale * t.shape[0] * UNIT_ROUNDOFF * frobenius_norm(t)


def spy_image(t, threshold: Optional[float] = None) -> SpyImage:
    t = as_matrix(t, "t")
    thr = default_threshold(t) if threshold is None else threshold
    return SpyImage(threshold=thr, grid=np.abs(t) > thr)


def spy_emit(t, threshold: Optional[float] = None, fmt: str = "text",
             path: Optional[Union[str, Path]] = None) -> SpyImage:
    """Build the spy image and, when path is given, write it in `fmt`"""
    if fmt not in FORMATS:
        raise ValueError(f"spy format must be one of {FORMATS}, got {fmt!r}")
    image = spy_image(t, threshold)
    if path is not None:
        path = Path(path)
        if fmt == "text":
            path.write_text(image.to_text())
        else:
            path.write_bytes(image.to_pgm())
    return image
