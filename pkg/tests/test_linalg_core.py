import numpy as np
import pytest
from hypothesis import given, strategies

from modules.errors import EigenConvergenceError, InputError, NotPSDError, SingularMatrixError
from modules.linalg_core import (Tolerance, abs_op, as_matrix, block_off_diag, eig_hermitian,
                                 eig_hermitian_stack, gram, hermitian_part, imaginary_part,
                                 inverse, inverse_sqrt_pd, is_psd, lambda_min, load_matrix,
                                 loewner_leq, matrix_from_dict, matrix_to_dict,
                                 psd_block_norm_equiv, save_matrix,
                                 singular_values, spectral_norm, sqrt_leq_equiv, sqrt_psd)
from modules.verdict import STATUS_FAIL, STATUS_PASS
from tests.strategies import complex_matrices, hermitian_matrices


@given(strategies.data())
def test_eig_hermitian_matches_numpy(data):
    H = data.draw(hermitian_matrices())
    dec = eig_hermitian(H)
    scale = max(1.0, np.linalg.norm(H))
    assert np.allclose(dec.values, np.linalg.eigvalsh(H), atol=1e-10 * scale)
    assert np.all(np.diff(dec.values) >= 0)
    assert dec.residual(H) <= 1e-10 * scale
    assert dec.unitarity_residual() <= 1e-10


def test_eig_hermitian_reports_non_convergence():
    H = np.array([[1.0, 2.0], [2.0, -1.0]])
    with pytest.raises(EigenConvergenceError) as info:
        eig_hermitian(H, max_sweeps=0)
    assert info.value.sweeps == 0
    assert info.value.residual > 0


def test_eig_hermitian_diagonal_needs_no_sweep():
    dec = eig_hermitian(np.diag([3.0, -1.0, 2.0]))
    assert dec.sweeps == 0
    assert list(dec.values) == [-1.0, 2.0, 3.0]


def _random_hermitian(rng, n, scale=1.0):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (G + G.conj().T) / 2


def test_eig_hermitian_large_matrix(rng):
    H = _random_hermitian(rng, 64)
    dec = eig_hermitian(H)
    scale = max(1.0, np.linalg.norm(H))
    assert dec.residual(H) <= 1e-10 * scale
    assert dec.unitarity_residual() <= 1e-10
    assert np.allclose(dec.values, np.linalg.eigvalsh(H), atol=1e-10 * scale)


def test_eig_hermitian_two_by_two_closed_form():
    rng = np.random.Generator(np.random.PCG64(77))
    for _ in range(1000):
        scale = 10.0 ** rng.uniform(-3, 3)
        a, d = scale * rng.standard_normal(2)
        b = scale * complex(rng.standard_normal(), rng.standard_normal())
        radius = np.hypot((a - d) / 2, abs(b))
        expected = [(a + d) / 2 - radius, (a + d) / 2 + radius]
        values = eig_hermitian([[a, b], [np.conj(b), d]]).values
        bound = 1e-12 * max(1.0, abs(a), abs(d), abs(b))
        assert abs(values[0] - expected[0]) <= bound
        assert abs(values[1] - expected[1]) <= bound


def test_eig_hermitian_warm_start(rng):
    X = _random_hermitian(rng, 5)
    Y = X + 1e-9 * _random_hermitian(rng, 5)
    cold = eig_hermitian(Y)
    warm = eig_hermitian(Y, start=eig_hermitian(X).vectors)
    scale = max(1.0, np.linalg.norm(Y))
    assert warm.sweeps <= 2
    assert warm.sweeps < cold.sweeps
    assert np.allclose(warm.values, cold.values, atol=1e-12 * scale)
    assert warm.residual(Y) <= 1e-10 * scale


def test_eig_hermitian_rejects_bad_start():
    with pytest.raises(InputError):
        eig_hermitian(np.eye(3), start=np.eye(2))


def test_eig_hermitian_stack_matches_single(rng):
    X = np.stack([_random_hermitian(rng, 4, scale) for scale in (1e-3, 0.5, 1.0, 7.0, 300.0)])
    stack = eig_hermitian_stack(X)
    assert stack.values.shape == (5, 4)
    assert stack.vectors.shape == (5, 4, 4)
    for k in range(5):
        scale = max(1.0, np.linalg.norm(X[k]))
        single = eig_hermitian(X[k])
        assert np.allclose(stack.values[k], single.values, atol=1e-12 * scale)
        V = stack.vectors[k]
        assert np.linalg.norm(X[k] @ V - V * stack.values[k]) <= 1e-10 * scale
        assert np.linalg.norm(V.conj().T @ V - np.eye(4)) <= 1e-10


def test_eig_hermitian_stack_warm_start(rng):
    X = np.stack([_random_hermitian(rng, 4) for _ in range(3)])
    Y = X + 1e-9 * np.stack([_random_hermitian(rng, 4) for _ in range(3)])
    warm = eig_hermitian_stack(Y, start=eig_hermitian_stack(X).vectors)
    assert warm.sweeps <= 2
    for k in range(3):
        assert np.allclose(warm.values[k], np.linalg.eigvalsh(Y[k]), atol=1e-12 * np.linalg.norm(Y[k]))


def test_eig_hermitian_stack_errors():
    with pytest.raises(InputError):
        eig_hermitian_stack(np.eye(2))
    with pytest.raises(InputError):
        eig_hermitian_stack(np.zeros((0, 2, 2)))
    with pytest.raises(InputError):
        eig_hermitian_stack(np.ones((2, 3, 3)), start=np.ones((2, 2, 2)))
    with pytest.raises(EigenConvergenceError):
        eig_hermitian_stack(np.array([np.eye(2), [[1.0, 2.0], [2.0, -1.0]]]), max_sweeps=0)
    diagonal = eig_hermitian_stack(np.array([np.diag([2.0, 1.0])]))
    assert diagonal.sweeps == 0
    assert list(diagonal.values[0]) == [1.0, 2.0]


def test_as_matrix_rejects_bad_input():
    with pytest.raises(InputError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(InputError):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(InputError):
        as_matrix([[1.0, np.inf], [0.0, 1.0]])


def test_results_are_read_only_copies():
    data = np.eye(2, dtype=complex)
    A = as_matrix(data)
    data[0, 0] = 5
    assert A[0, 0] == 1
    assert not A.flags.writeable
    assert not hermitian_part(A).flags.writeable


@given(strategies.data())
def test_real_and_imaginary_parts_rebuild_matrix(data):
    A = data.draw(complex_matrices())
    R = hermitian_part(A)
    S = imaginary_part(A)
    assert np.allclose(R + 1j * S, A)
    assert np.allclose(R, R.conj().T)
    assert np.allclose(S, S.conj().T)


@given(strategies.data())
def test_abs_op_squares_to_gram(data):
    A = data.draw(complex_matrices())
    P = abs_op(A)
    scale = max(1.0, np.linalg.norm(A) ** 2)
    assert np.allclose(P @ P, gram(A), atol=1e-9 * scale)
    assert is_psd(P)


@given(strategies.data())
def test_spectral_norm_and_singular_values(data):
    A = data.draw(complex_matrices())
    expected = np.linalg.svd(A, compute_uv=False)
    scale = max(1.0, expected[0])
    assert spectral_norm(A) == pytest.approx(expected[0], abs=1e-9 * scale)
    assert np.allclose(singular_values(A), np.sort(expected), atol=1e-7 * scale)


def test_abs_op_of_nilpotent():
    J = [[0, 1], [0, 0]]
    assert np.allclose(abs_op(J), np.diag([0.0, 1.0]))


def test_sqrt_psd_rejects_negative_spectrum():
    with pytest.raises(NotPSDError) as info:
        sqrt_psd(np.diag([1.0, -1.0]))
    assert info.value.lambda_min == pytest.approx(-1.0)


def test_sqrt_psd_clamps_roundoff():
    root = sqrt_psd(np.diag([4.0, -1e-14]))
    assert np.allclose(root, np.diag([2.0, 0.0]))


def test_loewner_leq_slack_and_status():
    I = np.eye(2)
    ok = loewner_leq(I, 2 * I)
    assert ok.passed and ok.status == STATUS_PASS
    assert ok.slack == pytest.approx(1.0)
    bad = loewner_leq(2 * I, I)
    assert not bad.passed and bad.status == STATUS_FAIL
    assert bad.slack == pytest.approx(-1.0)
    assert bad.normalized_slack == pytest.approx(-0.5)


def test_loewner_leq_dimension_mismatch():
    with pytest.raises(InputError):
        loewner_leq(np.eye(2), np.eye(3))


def test_inverse_matches_numpy(rng):
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.allclose(inverse(A), np.linalg.inv(A))


def test_inverse_of_singular_matrix():
    with pytest.raises(SingularMatrixError):
        inverse([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError) as info:
        inverse(np.diag([1.0, 1e-14]))
    assert info.value.condition > 1e12


def test_inverse_sqrt_pd():
    Y = np.diag([4.0, 9.0])
    assert np.allclose(inverse_sqrt_pd(Y), np.diag([0.5, 1 / 3]))
    with pytest.raises(SingularMatrixError):
        inverse_sqrt_pd(np.diag([1.0, 0.0]))


def test_sqrt_leq_equiv_reports_critical_alpha():
    X = np.diag([1.0, 2.0])
    Y = np.eye(2)
    verdict = sqrt_leq_equiv(X, Y, 3.0)
    assert verdict.passed
    assert verdict.details['left'] and verdict.details['right']
    assert verdict.details['critical_alpha'] == pytest.approx(2.0)
    below = sqrt_leq_equiv(X, Y, 1.0)
    assert below.passed
    assert not below.details['left'] and not below.details['right']


def test_psd_block_norm_equiv():
    X = [[0.0, 2.0], [0.0, 0.0]]
    assert psd_block_norm_equiv(X, 3.0).details['left']
    assert not psd_block_norm_equiv(X, 1.0).details['left']
    assert psd_block_norm_equiv(X, 1.0).passed


def test_block_off_diag_layout():
    S = np.eye(2)
    T = 2j * np.eye(2)
    block = block_off_diag(S, T)
    assert block.shape == (4, 4)
    assert np.allclose(block[:2, 2:], S)
    assert np.allclose(block[2:, :2], -2j * np.eye(2))
    assert lambda_min(hermitian_part(block)) < 0


def test_matrix_json_file(tmp_path):
    A = np.array([[5 - 4j, 2j], [1 + 1j, 6]])
    path = str(tmp_path / 'a.json')
    save_matrix(A, path)
    assert np.array_equal(load_matrix(path), A)
    assert matrix_to_dict(A)['entries'][0] == [5.0, -4.0]


def test_matrix_from_dict_errors(tmp_path):
    with pytest.raises(InputError):
        matrix_from_dict({'n': 2, 'entries': [[1, 0]]})
    with pytest.raises(InputError):
        matrix_from_dict({'entries': []})
    with pytest.raises(InputError):
        load_matrix(str(tmp_path / 'missing.json'))


def test_tolerance_validation():
    with pytest.raises(InputError):
        Tolerance(0.0)
    tol = Tolerance(1e-6)
    assert tol.band(0.5) == pytest.approx(1e-6)
    assert tol.band(10.0, 100.0) == pytest.approx(1e-4)
    assert tol.widened(10).rel == pytest.approx(1e-5)
