import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies

from modules.errors import InputError
from modules.linalg_core import spectral_norm
from modules.numrad import (Enclosure, basic_bounds, numerical_radius, range_samples,
                            rotated_real_max)
from tests.strategies import complex_matrices, seeds, unit_vectors


@pytest.mark.parametrize('A, omega', [
    (np.eye(3), 1.0),
    ([[0.0, 1.0], [0.0, 0.0]], 0.5),
    (np.diag([1.0, -3.0]), 3.0),
    (2j * np.eye(2), 2.0),
    ([[1.0, 2.0], [0.0, 1.0]], 2.0),
])
def test_numerical_radius_known_values(A, omega):
    enclosure = numerical_radius(A)
    assert enclosure.contains(omega, slack=1e-12)
    assert enclosure.width <= 1e-8 * max(1.0, spectral_norm(A))


def test_zero_matrix():
    enclosure = numerical_radius(np.zeros((2, 2)))
    assert enclosure.lo == 0.0 and enclosure.hi == 0.0


@settings(max_examples=15)
@given(strategies.data())
def test_enclosure_brackets_sampled_values(data):
    A = data.draw(complex_matrices(max_dim=3))
    enclosure = numerical_radius(A, eps=1e-6)
    norm = spectral_norm(A)
    rng = np.random.Generator(np.random.PCG64(0))
    sampled = max(abs(np.vdot(x, A @ x)) for x in unit_vectors(rng, A.shape[0], 200))
    grid = max(rotated_real_max(A, theta) for theta in np.linspace(0, 2 * math.pi, 90, endpoint=False))
    assert enclosure.hi >= sampled - 1e-9
    assert enclosure.hi >= grid - 1e-9
    assert enclosure.lo <= grid + norm * math.pi / 90 + 1e-9
    assert norm / 2 <= enclosure.hi + 1e-9
    assert enclosure.lo <= norm + 1e-9
    assert enclosure.width <= 1e-6 * max(1.0, norm)


def test_smaller_eps_tightens(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    coarse = numerical_radius(A, eps=1e-3)
    fine = numerical_radius(A, eps=1e-9)
    assert fine.width <= 1e-9 * max(1.0, spectral_norm(A))
    assert coarse.contains(fine.mid, slack=1e-8)


def test_numerical_radius_rejects_bad_eps():
    with pytest.raises(InputError):
        numerical_radius(np.eye(2), eps=0.0)
    with pytest.raises(InputError):
        numerical_radius(np.eye(2), initial_intervals=1)


def test_enclosure_validation():
    with pytest.raises(InputError):
        Enclosure(2.0, 1.0)
    e = Enclosure(1.0, 3.0)
    assert e.width == 2.0 and e.mid == 2.0
    assert e.to_dict() == {'lo': 1.0, 'hi': 3.0}


def test_rotated_real_max_at_zero_is_top_of_real_part():
    A = np.array([[1.0, 2j], [0.0, 3.0]])
    expected = np.linalg.eigvalsh((A + A.conj().T) / 2)[-1]
    assert rotated_real_max(A, 0.0) == pytest.approx(expected)


def test_range_samples_lie_in_numerical_range():
    A = np.array([[1.0, 1.0], [0.0, 2j]])
    omega = numerical_radius(A)
    points = range_samples(A, 24)
    assert len(points) == 24
    assert points[0].theta == 0.0
    assert max(abs(p.z) for p in points) <= omega.hi + 1e-9


def test_range_samples_of_hermitian_lie_on_segment():
    points = range_samples(np.diag([-1.0, 2.0]), 8)
    for p in points:
        assert abs(p.z.imag) < 1e-12
        assert -1.0 - 1e-12 <= p.z.real <= 2.0 + 1e-12


def test_range_samples_needs_three_points():
    with pytest.raises(InputError):
        range_samples(np.eye(2), 2)


@settings(max_examples=10)
@given(strategies.data())
def test_basic_bounds_hold(data):
    A = data.draw(complex_matrices(max_dim=3))
    verdicts = basic_bounds(A, eps=1e-6)
    assert [v.case_id for v in verdicts] == [
        'w.basic_bounds.half_norm', 'w.basic_bounds.norm',
        'w.basic_bounds.real', 'w.basic_bounds.imag',
    ]
    assert all(v.passed for v in verdicts)


def _overlap(first, second, slack):
    return first.lo <= second.hi + slack and second.lo <= first.hi + slack


def _random_unitary(rng, n):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return Q


@settings(max_examples=20)
@given(strategies.data())
def test_numerical_radius_is_rotation_invariant(data):
    A = data.draw(complex_matrices(max_dim=4))
    phi = data.draw(strategies.floats(min_value=0.0, max_value=2 * math.pi))
    slack = 1e-11 * max(1.0, spectral_norm(A))
    base = numerical_radius(A, eps=1e-9)
    rotated = numerical_radius(np.exp(1j * phi) * A, eps=1e-9)
    assert _overlap(base, rotated, slack)
    assert abs(base.mid - rotated.mid) <= 2e-9 * max(1.0, spectral_norm(A)) + slack


@settings(max_examples=20)
@given(strategies.data())
def test_numerical_radius_is_unitarily_invariant(data):
    A = data.draw(complex_matrices(max_dim=4))
    U = _random_unitary(np.random.Generator(np.random.PCG64(data.draw(seeds))), A.shape[0])
    slack = 1e-10 * max(1.0, spectral_norm(A))
    base = numerical_radius(A, eps=1e-9)
    conjugated = numerical_radius(U @ A @ U.conj().T, eps=1e-9)
    assert _overlap(base, conjugated, slack)


@pytest.mark.parametrize('eigenvalues, omega', [
    ([1 + 2j, -3.0, 0.5j], 3.0),
    ([2j, -2j], 2.0),
    ([1.0, 1j, -1.0, -1j], 1.0),
    ([0.3 - 0.4j, 0.1], 0.5),
])
def test_numerical_radius_of_normal_matrix(eigenvalues, omega, rng):
    n = len(eigenvalues)
    U = _random_unitary(rng, n)
    for A in (np.diag(eigenvalues), (U * np.asarray(eigenvalues)) @ U.conj().T):
        enclosure = numerical_radius(A)
        scale = max(1.0, omega)
        assert enclosure.contains(omega, slack=1e-11 * scale)
        assert enclosure.width <= 1e-8 * max(1.0, spectral_norm(A))


def test_numerical_radius_of_random_normal_matrices(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        eigenvalues = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        U = _random_unitary(rng, n)
        omega = float(np.max(np.abs(eigenvalues)))
        enclosure = numerical_radius((U * eigenvalues) @ U.conj().T)
        assert enclosure.contains(omega, slack=1e-11 * max(1.0, omega))


def _support_values(A, thetas):
    H = (A + A.conj().T) / 2
    K = (A - A.conj().T) / 2j
    c = np.cos(thetas)[:, None, None]
    s = np.sin(thetas)[:, None, None]
    return np.linalg.eigvalsh(c * H - s * K)[:, -1]


def _dense_grid_radius(A, points=100_000):
    """max over a uniform angle grid, each discrete local maximum refined by golden section."""
    thetas = np.linspace(0.0, 2 * math.pi, points, endpoint=False)
    values = np.concatenate([_support_values(A, chunk) for chunk in np.array_split(thetas, 20)])
    step = thetas[1]
    best = float(values.max())
    reach = spectral_norm(A) * step
    peaks = np.flatnonzero((values >= np.roll(values, 1)) & (values >= np.roll(values, -1))
                           & (values >= best - reach))
    ratio = (math.sqrt(5) - 1) / 2
    for k in peaks[np.argsort(-values[peaks], kind='stable')][:50]:
        a, b = thetas[k] - step, thetas[k] + step
        for _ in range(60):
            x1, x2 = b - ratio * (b - a), a + ratio * (b - a)
            f1, f2 = _support_values(A, np.array([x1, x2]))
            if f1 < f2:
                a = x1
            else:
                b = x2
        best = max(best, float(_support_values(A, np.array([0.5 * (a + b)]))[0]))
    return best


@pytest.mark.slow
def test_numerical_radius_against_dense_grid():
    rng = np.random.Generator(np.random.PCG64(31))
    eps = 1e-8
    for _ in range(200):
        n = int(rng.integers(2, 7))
        A = 10.0 ** rng.uniform(-1, 1) * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        scale = max(1.0, spectral_norm(A))
        enclosure = numerical_radius(A, eps=eps)
        oracle = _dense_grid_radius(A)
        assert oracle <= enclosure.hi + 1e-12 * scale
        assert abs(enclosure.mid - oracle) <= 2 * eps * scale
