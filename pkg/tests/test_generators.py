import numpy as np
import pytest

from linalg.errors import GeneratorError
from linalg.kernels import UNIT_ROUNDOFF, unitarity_residual
from tools.generators import GeneratorSpec, generate, parse_generator


def test_fourier_of_order_two():
    u = generate(GeneratorSpec("fourier", 2))
    np.testing.assert_allclose(u, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)


def test_fourier_needs_two():
    with pytest.raises(GeneratorError):
        GeneratorSpec("fourier", 1)


def test_circulant_shifts_coordinates():
    u = generate(GeneratorSpec("circulant_generator", 4))
    assert np.array_equal(u @ np.eye(4)[:, 0], np.eye(4)[:, 1])
    assert np.array_equal(u @ np.eye(4)[:, 3], np.eye(4)[:, 0])


def test_haar_is_unitary_and_seeded():
    a = generate(GeneratorSpec("haar_random", 16, seed=7))
    b = generate(GeneratorSpec("haar_random", 16, seed=7))
    assert unitarity_residual(a) <= 160 * UNIT_ROUNDOFF
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, generate(GeneratorSpec("haar_random", 16, seed=8)))


def test_parse_generator():
    assert parse_generator("fourier:32") == GeneratorSpec("fourier", 32, 1)
    assert parse_generator("circulant:16", seed=4).kind == "circulant_generator"
    spec = parse_generator("companion:1,0,-1")
    assert spec.n == 2 and spec.params == (-1, 0)
    np.testing.assert_array_equal(generate(spec), [[0, 1], [1, 0]])


def test_direct_sum_spec():
    spec = parse_generator("direct_sum:haar:3+circulant:2", seed=5)
    assert spec.n == 5
    assert spec.params[0].seed == 5 and spec.params[1].seed == 6
    u = generate(spec)
    assert not u[3:, :3].any() and not u[:3, 3:].any()
    assert unitarity_residual(u) < 1e-14


@pytest.mark.parametrize("text", ["fourier", "fourier:x", "unknown:3", "companion:2,1", "direct_sum:"])
def test_bad_specs(text):
    with pytest.raises(GeneratorError):
        parse_generator(text)
