import json

import numpy as np
import pytest

from linalg.errors import FormatError
from linalg.matrix_io import (
    dumps_cmtx,
    loads_cmtx,
    loads_polynomial,
    parse_complex_token,
    parse_inline_coefficients,
    read_cmtx,
    read_polynomial,
    write_cmtx,
    write_json_report,
    write_polynomial,
)


def test_cmtx_round_trip_is_bit_exact(tmp_path, haar16):
    path = write_cmtx(tmp_path / "u.cmtx", haar16)
    back = read_cmtx(path)
    assert np.array_equal(back, haar16)


def test_cmtx_is_column_major():
    text = dumps_cmtx(np.array([[1, 2], [3, 4]]))
    lines = text.splitlines()
    assert lines[0] == "cmtx 2 2"
    assert [ln.split()[0] for ln in lines[1:]] == ["1.0", "3.0", "2.0", "4.0"]


def test_cmtx_errors_carry_line_numbers():
    with pytest.raises(FormatError, match="line 1"):
        loads_cmtx("matrix 2 2\n")
    with pytest.raises(FormatError, match="line 3"):
        loads_cmtx("cmtx 1 2\n1.0 0.0\nabc 0.0\n")
    with pytest.raises(FormatError, match="expected 4 entries"):
        loads_cmtx("cmtx 2 2\n1.0 0.0\n")


def test_read_missing_file(tmp_path):
    with pytest.raises(FormatError):
        read_cmtx(tmp_path / "nope.cmtx")


def test_polynomial_file(tmp_path):
    coeffs = [-6, 11, -6]
    path = write_polynomial(tmp_path / "p.txt", coeffs)
    assert path.read_text().splitlines()[0] == "poly 3"
    assert read_polynomial(path) == [-6, 11, -6]
    with pytest.raises(FormatError):
        loads_polynomial("poly 2\n1.0 0.0\n")


def test_inline_coefficients():
    assert parse_inline_coefficients("1,0,-1") == [-1, 0]
    assert parse_inline_coefficients("1, -6, 11, -6") == [-6, 11, -6]
    with pytest.raises(FormatError):
        parse_inline_coefficients("2,0,-1")


def test_complex_tokens():
    assert parse_complex_token("1+2i") == 1 + 2j
    assert parse_complex_token("-2.5") == -2.5
    with pytest.raises(FormatError):
        parse_complex_token("one")


def test_json_report_is_sorted(tmp_path):
    path = write_json_report(tmp_path / "r.json", {"b": 1, "a": [1.5]})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1.5], "b": 1}
