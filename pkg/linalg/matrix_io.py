"""
Text formats: CMTX v1 matrices, polynomial files, inline coefficient
lists and JSON reports.
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from .errors import FormatError
from .kernels import as_matrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _format_real(x: float) -> str:
    # repr is the shortest string that round-trips a double
    return repr(float(x))


def _parse_real(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"cannot parse number {token!r}", line)
    if not math.isfinite(value):
        raise FormatError(f"non-finite value {token!r}", line)
    return value


def _parse_complex_line(text: str, line: int) -> complex:
    parts = text.split()
    if len(parts) != 2:
        raise FormatError(f"expected '<re> <im>', got {text!r}", line)
    return complex(_parse_real(parts[0], line), _parse_real(parts[1], line))


def dumps_cmtx(a) -> str:
    a = as_matrix(a)
    rows, cols = a.shape
    out = [f"cmtx {rows} {cols}"]
    for value in a.flatten(order="F"):
        out.append(f"{_format_real(value.real)} {_format_real(value.imag)}")
    return "\n".join(out) + "\n"


def loads_cmtx(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty CMTX document")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "cmtx":
        raise FormatError(f"bad header {lines[0]!r}", 1)
    try:
        rows, cols = int(header[1]), int(header[2])
    except ValueError:
        raise FormatError(f"bad dimensions in header {lines[0]!r}", 1)
    if rows < 0 or cols < 0:
        raise FormatError("negative dimensions", 1)
    expected = rows * cols
    if len(lines) - 1 != expected:
        raise FormatError(f"expected {expected} entries, found {len(lines) - 1}")
    data = np.array(
        [_parse_complex_line(text_line, k + 2) for k, text_line in enumerate(lines[1:])],
        dtype=np.complex128,
    )
    return data.reshape((rows, cols), order="F")


def write_cmtx(path: PathLike, a) -> Path:
    path = Path(path)
    path.write_text(dumps_cmtx(a))
    logger.debug("wrote %s", path)
    return path


def read_cmtx(path: PathLike) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}")
    return loads_cmtx(text)


def dumps_polynomial(coefficients: Sequence[complex]) -> str:
    """`poly <degree>` then a0 ... a_{n-1}, one `<re> <im>` line each"""
    out = [f"poly {len(coefficients)}"]
    for c in coefficients:
        c = complex(c)
        out.append(f"{_format_real(c.real)} {_format_real(c.imag)}")
    return "\n".join(out) + "\n"


def loads_polynomial(text: str) -> List[complex]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty polynomial document")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "poly":
        raise FormatError(f"bad header {lines[0]!r}", 1)
    try:
        degree = int(header[1])
    except ValueError:
        raise FormatError(f"bad degree {header[1]!r}", 1)
    if degree < 1:
        raise FormatError("degree must be at least 1", 1)
    if len(lines) - 1 != degree:
        raise FormatError(f"expected {degree} coefficients, found {len(lines) - 1}")
    return [_parse_complex_line(ln, k + 2) for k, ln in enumerate(lines[1:])]


def read_polynomial(path: PathLike) -> List[complex]:
    path = Path(path)
    try:
        return loads_polynomial(path.read_text())
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}")


def write_polynomial(path: PathLike, coefficients: Sequence[complex]) -> Path:
    path = Path(path)
    path.write_text(dumps_polynomial(coefficients))
    return path


def parse_complex_token(token: str) -> complex:
    """Accepts `1`, `-2.5`, `1+2j` or `1+2i`"""
    token = token.strip()
    try:
        value = complex(token.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise FormatError(f"cannot parse coefficient {token!r}")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise FormatError(f"non-finite coefficient {token!r}")
    return value


def parse_inline_coefficients(text: str) -> List[complex]:
    """
    Inline list, highest degree first, leading coefficient 1.

    Returns:
        a0 ... a_{n-1} of the monic polynomial
    """
    tokens = [t for t in text.split(",") if t.strip()]
    if len(tokens) < 2:
        raise FormatError("need at least a leading 1 and one more coefficient")
    values = [parse_complex_token(t) for t in tokens]
    if values[0] != 1:
        raise FormatError(f"leading coefficient must be 1, got {tokens[0].strip()!r}")
    return list(reversed(values[1:]))


def complex_list_to_json(values: Sequence[complex]) -> List[Dict[str, float]]:
    return [{"re": float(complex(v).real), "im": float(complex(v).imag)} for v in values]


def write_json_report(path: PathLike, report: Dict[str, Any]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug("report saved to %s", path)
    return path
