"""
Linear Algebra Core Module

Dense complex matrix primitives: Hermitian/skew parts, a cyclic complex
Jacobi eigensolver for single matrices and for (b, n, n) stacks, PSD square
root, polar absolute value, spectral norm, Loewner-order predicates, block
composition and JSON matrix files.

Matrices are numpy complex128 arrays; every public function returns fresh,
read-only arrays and never mutates its inputs.
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from .errors import (EigenConvergenceError, InputError, NotPSDError,
                     SingularMatrixError)
from .verdict import (RELATION_LOEWNER, STATUS_FAIL, STATUS_PASS, Verdict,
                      equivalence_verdict)


JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TARGET = 1e-13
HERMITIAN_TOL = 1e-12
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance; all comparisons scale it by max(1, operand norms)."""

    rel: float = 1e-8

    def __post_init__(self):
        if not (self.rel > 0 and math.isfinite(self.rel)):
            raise InputError(f'Tolerance must be positive, got {self.rel}')

    def band(self, *norms: float) -> float:
        """Absolute tolerance for operands with the given norms."""
        return self.rel * max([1.0] + [abs(float(x)) for x in norms])

    def widened(self, factor: float) -> 'Tolerance':
        return Tolerance(self.rel * factor)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending and unitary eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def residual(self, X: np.ndarray) -> float:
        """Frobenius norm of XV - V diag(values)."""
        X = np.asarray(X)
        return float(np.linalg.norm(X @ self.vectors - self.vectors * self.values))

    def unitarity_residual(self) -> float:
        n = self.vectors.shape[0]
        return float(np.linalg.norm(adjoint(self.vectors) @ self.vectors - np.eye(n)))

    def apply(self, func) -> np.ndarray:
        """Functional calculus V f(Lambda) V*."""
        fvals = np.asarray([func(v) for v in self.values], dtype=complex)
        return _frozen((self.vectors * fvals) @ adjoint(self.vectors))


def _frozen(X: np.ndarray) -> np.ndarray:
    X.flags.writeable = False
    return X


def as_matrix(data: Any) -> np.ndarray:
    """Validate and convert input to a square, finite complex matrix.

    Args:
        data: Array-like n x n input

    Returns:
        Read-only complex128 copy

    Raises:
        InputError: If the input is not square or has NaN/Inf entries
    """
    try:
        A = np.array(data, dtype=complex)
    except (TypeError, ValueError) as e:
        raise InputError(f'Cannot convert input to a complex matrix: {e}') from e
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InputError(f'Expected a non-empty square matrix, got shape {A.shape}')
    if not np.all(np.isfinite(A)):
        raise InputError('Matrix has non-finite entries')
    return _frozen(A)


def adjoint(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def identity(n: int) -> np.ndarray:
    return _frozen(np.eye(n, dtype=complex))


def as_hermitian(X: Any) -> np.ndarray:
    """Symmetrize to (X + X*)/2 so the Hermitian invariant holds exactly."""
    X = as_matrix(X)
    return _frozen((X + adjoint(X)) / 2)


def hermitian_part(A: Any) -> np.ndarray:
    """Real part (A + A*)/2."""
    A = as_matrix(A)
    return _frozen((A + adjoint(A)) / 2)


def imaginary_part(A: Any) -> np.ndarray:
    """Imaginary part (A - A*)/(2i)."""
    A = as_matrix(A)
    return _frozen((A - adjoint(A)) / 2j)


def is_hermitian(X: Any) -> bool:
    X = np.asarray(X)
    gap = np.linalg.norm(X - adjoint(X))
    return bool(gap <= HERMITIAN_TOL * max(1.0, float(np.linalg.norm(X))))


@dataclass(frozen=True)
class EigenStack:
    """Eigendecompositions of a stack of Hermitian matrices.

    values has shape (b, n) with each row ascending; vectors has shape
    (b, n, n) with eigenvector columns.
    """

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


def _stack_adjoint(X: np.ndarray) -> np.ndarray:
    return np.swapaxes(X, -1, -2).conj()


def _off_diagonal_norms(H: np.ndarray) -> np.ndarray:
    mask = ~np.eye(H.shape[-1], dtype=bool)
    return np.linalg.norm(H * mask, axis=(-2, -1))


def eig_hermitian_stack(X: Any, max_sweeps: int = JACOBI_MAX_SWEEPS,
                        start: Optional[np.ndarray] = None) -> EigenStack:
    """Cyclic complex Jacobi applied to every matrix of a (b, n, n) stack at once.

    Each rotation first removes the phase of the pivot entry, then applies
    the classical real Jacobi rotation to the two affected rows and columns
    of every matrix in the stack. A matrix stops rotating once its
    off-diagonal Frobenius norm is at most 1e-13 * max(1, ||X_k||_F).

    Args:
        X: Stack of Hermitian matrices (symmetrized on entry)
        max_sweeps: Maximum number of cyclic sweeps
        start: Stack of unitary matrices whose columns approximate the
            eigenvectors, e.g. those of nearby matrices; iteration starts
            from start_k* X_k start_k

    Returns:
        EigenStack; sweeps is the count needed by the slowest matrix

    Raises:
        EigenConvergenceError: If some matrix misses the target
        InputError: On a malformed stack or a start of the wrong shape
    """
    try:
        X = np.array(X, dtype=complex)
    except (TypeError, ValueError) as e:
        raise InputError(f'Cannot convert input to a matrix stack: {e}') from e
    if X.ndim != 3 or X.shape[1] != X.shape[2] or 0 in X.shape:
        raise InputError(f'Expected a non-empty (b, n, n) stack, got shape {X.shape}')
    if not np.all(np.isfinite(X)):
        raise InputError('Matrix stack has non-finite entries')
    X = (X + _stack_adjoint(X)) / 2
    b, n, _ = X.shape
    targets = JACOBI_OFF_TARGET * np.maximum(1.0, np.linalg.norm(X, axis=(-2, -1)))
    if start is None:
        H = X
        V = np.tile(np.eye(n, dtype=complex), (b, 1, 1))
    else:
        V = np.array(start, dtype=complex)
        if V.shape != X.shape:
            raise InputError(f'Starting bases must have shape {X.shape}, got {V.shape}')
        H = _stack_adjoint(V) @ X @ V
        H = (H + _stack_adjoint(H)) / 2
    # every pivot below this is skipped; if all are, the off-diagonal norm is within target
    skip = targets / n

    sweeps = 0
    off = _off_diagonal_norms(H)
    live = off > targets
    while live.any():
        if sweeps >= max_sweeps:
            worst = float(off.max())
            raise EigenConvergenceError(
                f'Jacobi did not converge after {sweeps} sweeps (off-diagonal {worst:.3e})',
                residual=worst, sweeps=sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = H[:, p, q]
                mag = np.abs(apq)
                rotate = live & (mag > skip)
                if not rotate.any():
                    continue
                safe = np.where(rotate, mag, 1.0)
                phase = np.where(rotate, apq / safe, 1.0)
                theta = (H[:, q, q].real - H[:, p, p].real) / (2.0 * safe)
                t = np.where(rotate, np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                conj_phase = phase.conjugate()
                G = np.empty((b, 2, 2), dtype=complex)
                G[:, 0, 0] = c
                G[:, 0, 1] = s
                G[:, 1, 0] = -s * conj_phase
                G[:, 1, 1] = c * conj_phase
                pq = [p, q]
                H[:, :, pq] = H[:, :, pq] @ G
                H[:, pq, :] = _stack_adjoint(G) @ H[:, pq, :]
                H[rotate, p, q] = 0.0
                H[rotate, q, p] = 0.0
                H[:, p, p] = H[:, p, p].real
                H[:, q, q] = H[:, q, q].real
                V[:, :, pq] = V[:, :, pq] @ G
        sweeps += 1
        off = _off_diagonal_norms(H)
        live = off > targets

    values = np.diagonal(H, axis1=-2, axis2=-1).real.copy()
    order = np.argsort(values, axis=-1, kind='stable')
    return EigenStack(values=_frozen(np.take_along_axis(values, order, axis=-1)),
                      vectors=_frozen(np.take_along_axis(V, order[:, None, :], axis=-1)),
                      sweeps=sweeps)


def _off_diagonal_norm(H: np.ndarray) -> float:
    return float(np.linalg.norm(H - np.diag(np.diag(H))))


def eig_hermitian(X: Any, max_sweeps: int = JACOBI_MAX_SWEEPS,
                  start: Optional[np.ndarray] = None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Same rotations as eig_hermitian_stack, with scalar arithmetic for the
    pivot. Iterates until the off-diagonal Frobenius norm is at most
    1e-13 * max(1, ||X||_F).

    Args:
        X: Hermitian matrix (symmetrized on entry)
        max_sweeps: Maximum number of cyclic sweeps
        start: Unitary matrix whose columns approximate the eigenvectors,
            e.g. the eigenvectors of a nearby matrix; iteration starts from
            start* X start

    Returns:
        EigenDecomposition with ascending eigenvalues

    Raises:
        EigenConvergenceError: If the target is not reached
        InputError: If start has the wrong shape
    """
    X = as_hermitian(X)
    n = X.shape[0]
    target = JACOBI_OFF_TARGET * max(1.0, float(np.linalg.norm(X)))
    if start is None:
        H = np.array(X)
        V = np.eye(n, dtype=complex)
    else:
        V = np.array(start, dtype=complex)
        if V.shape != (n, n):
            raise InputError(f'Starting basis must be {n} x {n}, got shape {V.shape}')
        H = adjoint(V) @ X @ V
        H = (H + adjoint(H)) / 2
    skip = target / n

    sweeps = 0
    off = _off_diagonal_norm(H)
    while off > target:
        if sweeps >= max_sweeps:
            raise EigenConvergenceError(
                f'Jacobi did not converge after {sweeps} sweeps (off-diagonal {off:.3e})',
                residual=off, sweeps=sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = H[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = apq / mag
                theta = (H[q, q].real - H[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                conj_phase = phase.conjugate()
                G = np.array([[c, s], [-s * conj_phase, c * conj_phase]])
                pq = [p, q]
                H[:, pq] = H[:, pq] @ G
                H[pq, :] = adjoint(G) @ H[pq, :]
                H[p, q] = 0.0
                H[q, p] = 0.0
                H[p, p] = H[p, p].real
                H[q, q] = H[q, q].real
                V[:, pq] = V[:, pq] @ G
        sweeps += 1
        off = _off_diagonal_norm(H)

    values = np.diag(H).real.copy()
    order = np.argsort(values, kind='stable')
    return EigenDecomposition(values=_frozen(values[order]),
                              vectors=_frozen(V[:, order]),
                              sweeps=sweeps)


def eigvalsh(X: Any) -> np.ndarray:
    return eig_hermitian(X).values


def lambda_min(X: Any) -> float:
    return float(eig_hermitian(X).values[0])


def lambda_max(X: Any) -> float:
    return float(eig_hermitian(X).values[-1])


def hermitian_norm(X: Any) -> float:
    """Spectral norm of a Hermitian matrix: max |lambda_i|."""
    values = eig_hermitian(X).values
    return float(max(abs(values[0]), abs(values[-1])))


def sqrt_psd(X: Any, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix.

    Eigenvalues in [-tol*scale, 0) are clamped to zero; anything more
    negative is rejected.

    Raises:
        NotPSDError: If lambda_min < -tol * max(1, ||X||)
    """
    dec = eig_hermitian(X)
    scale = max(abs(dec.values[0]), abs(dec.values[-1]))
    if dec.values[0] < -tol.band(scale):
        raise NotPSDError(f'Matrix is not PSD: lambda_min = {dec.values[0]:.6e}',
                          lambda_min=float(dec.values[0]))
    return dec.apply(lambda v: math.sqrt(max(v, 0.0)))


def gram(A: Any) -> np.ndarray:
    """|A|^2 = A*A."""
    A = as_matrix(A)
    return _frozen(adjoint(A) @ A)


def gram_adjoint(A: Any) -> np.ndarray:
    """|A*|^2 = AA*."""
    A = as_matrix(A)
    return _frozen(A @ adjoint(A))


def abs_op(A: Any) -> np.ndarray:
    """Polar absolute value |A| = (A*A)^(1/2)."""
    return sqrt_psd(gram(A))


def abs_adjoint(A: Any) -> np.ndarray:
    """|A*| = (AA*)^(1/2)."""
    return sqrt_psd(gram_adjoint(A))


def singular_values(A: Any) -> np.ndarray:
    """Singular values ascending, from the spectrum of A*A."""
    values = eig_hermitian(gram(A)).values
    return _frozen(np.sqrt(np.clip(values, 0.0, None)))


def spectral_norm(A: Any) -> float:
    """Largest singular value sqrt(lambda_max(A*A))."""
    return float(math.sqrt(max(lambda_max(gram(A)), 0.0)))


def is_psd(X: Any, tol: Tolerance = DEFAULT_TOL) -> bool:
    """lambda_min(X) >= -tol * max(1, ||X||)."""
    values = eig_hermitian(X).values
    scale = max(abs(values[0]), abs(values[-1]))
    return bool(values[0] >= -tol.band(scale))


def _check_same_shape(X: np.ndarray, Y: np.ndarray):
    if X.shape != Y.shape:
        raise InputError(f'Dimension mismatch: {X.shape} vs {Y.shape}')


def loewner_leq(X: Any, Y: Any, tol: Tolerance = DEFAULT_TOL,
                case_id: str = 'loewner', details: Optional[Dict[str, Any]] = None) -> Verdict:
    """Check X <= Y in the Loewner order.

    Passes iff lambda_min(Y - X) >= -tol * max(1, ||X||, ||Y||); the slack is
    lambda_min(Y - X).

    Raises:
        InputError: On dimension mismatch
    """
    X = as_hermitian(X)
    Y = as_hermitian(Y)
    _check_same_shape(X, Y)
    norm_x = hermitian_norm(X)
    norm_y = hermitian_norm(Y)
    gap = lambda_min(Y - X)
    scale = max(1.0, norm_x, norm_y)
    passed = gap >= -tol.rel * scale
    return Verdict(
        case_id=case_id,
        hypothesis_met=True,
        relation=RELATION_LOEWNER,
        lhs_summary=norm_x,
        rhs_summary=norm_y,
        slack=gap,
        normalized_slack=gap / scale,
        passed=bool(passed),
        status=STATUS_PASS if passed else STATUS_FAIL,
        details=dict(details or {}),
    )


def block_off_diag(S: Any, T: Any) -> np.ndarray:
    """The 2n x 2n operator matrix [[0, S], [T*, 0]]."""
    S = as_matrix(S)
    T = as_matrix(T)
    _check_same_shape(S, T)
    n = S.shape[0]
    block = np.zeros((2 * n, 2 * n), dtype=complex)
    block[:n, n:] = S
    block[n:, :n] = adjoint(T)
    return _frozen(block)


def inverse(A: Any) -> np.ndarray:
    """Inverse by Gaussian elimination with partial pivoting.

    Raises:
        SingularMatrixError: On a zero pivot or condition estimate > 1e12
    """
    A = as_matrix(A)
    n = A.shape[0]
    work = np.array(A)
    inv = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(A))))

    for k in range(n):
        pivot = k + int(np.argmax(np.abs(work[k:, k])))
        if abs(work[pivot, k]) <= 1e-300 * scale:
            raise SingularMatrixError('Matrix is singular (zero pivot)', condition=math.inf)
        if pivot != k:
            work[[k, pivot]] = work[[pivot, k]]
            inv[[k, pivot]] = inv[[pivot, k]]
        factors = work[k + 1:, k] / work[k, k]
        work[k + 1:, k:] -= np.outer(factors, work[k, k:])
        inv[k + 1:] -= np.outer(factors, inv[k])

    for k in range(n - 1, -1, -1):
        inv[k] = (inv[k] - work[k, k + 1:] @ inv[k + 1:]) / work[k, k]

    condition = spectral_norm(A) * spectral_norm(inv)
    if not math.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularMatrixError(f'Matrix is ill-conditioned (condition ~ {condition:.3e})',
                                  condition=condition)
    return _frozen(inv)


def inverse_sqrt_pd(Y: Any, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Y^(-1/2) for positive definite Y.

    Raises:
        SingularMatrixError: If lambda_min(Y) <= tol * max(1, ||Y||)
    """
    dec = eig_hermitian(Y)
    scale = max(abs(dec.values[0]), abs(dec.values[-1]))
    if dec.values[0] <= tol.band(scale):
        raise SingularMatrixError(f'Matrix is not positive definite: lambda_min = {dec.values[0]:.6e}')
    return dec.apply(lambda v: 1.0 / math.sqrt(v))


def sqrt_leq_equiv(X: Any, Y: Any, alpha: float, tol: Tolerance = DEFAULT_TOL,
                   case_id: str = 'lem.sqrt_equiv') -> Verdict:
    """Evaluate both sides of X <= alpha*Y  <=>  ||X^(1/2) Y^(-1/2)|| <= sqrt(alpha).

    Disagreement is recorded as 'boundary' when either side sits within its
    tolerance band of its own threshold.

    Raises:
        NotPSDError: If X is not PSD
        SingularMatrixError: If Y is not positive definite
    """
    if not alpha > 0:
        raise InputError(f'alpha must be positive, got {alpha}')
    X = as_hermitian(X)
    Y = as_hermitian(Y)
    _check_same_shape(X, Y)
    y_inv_sqrt = inverse_sqrt_pd(Y, tol)
    x_sqrt = sqrt_psd(X, tol)
    product_norm = spectral_norm(x_sqrt @ y_inv_sqrt)
    root = math.sqrt(alpha)

    left = loewner_leq(X, alpha * Y, tol)
    left_scale = max(1.0, left.lhs_summary, left.rhs_summary)
    right_margin = root - product_norm
    right_band = tol.band(root)
    right = right_margin >= -right_band

    boundary = (abs(left.slack) <= 4 * tol.rel * left_scale
                or abs(right_margin) <= 4 * right_band)
    return equivalence_verdict(case_id, left.passed, right, boundary, details={
        'lambda_min_gap': left.slack,
        'product_norm': product_norm,
        'sqrt_alpha': root,
        'critical_alpha': product_norm ** 2,
    })


def psd_block_norm_equiv(X: Any, c: float, tol: Tolerance = DEFAULT_TOL,
                         case_id: str = 'psd_block_norm') -> Verdict:
    """Check [[cI, X], [X*, cI]] >= 0  <=>  ||X|| <= c."""
    if not c > 0:
        raise InputError(f'c must be positive, got {c}')
    X = as_matrix(X)
    n = X.shape[0]
    block = np.zeros((2 * n, 2 * n), dtype=complex)
    block[:n, :n] = c * np.eye(n)
    block[n:, n:] = c * np.eye(n)
    block[:n, n:] = X
    block[n:, :n] = adjoint(X)
    block_min = lambda_min(block)
    norm = spectral_norm(X)
    left = is_psd(block, tol)
    right = norm <= c + tol.band(c)
    boundary = abs(c - norm) <= 4 * tol.band(c, norm)
    return equivalence_verdict(case_id, left, right, boundary, details={
        'block_lambda_min': block_min,
        'norm': norm,
        'c': c,
    })


def matrix_to_dict(A: Any) -> Dict[str, Any]:
    """JSON object {"n": n, "entries": [[re, im], ...]} in row-major order."""
    A = as_matrix(A)
    n = A.shape[0]
    entries = [[float(z.real), float(z.imag)] for z in A.reshape(-1)]
    return {'n': n, 'entries': entries}


def matrix_from_dict(obj: Dict[str, Any]) -> np.ndarray:
    """Parse the JSON matrix object.

    Raises:
        InputError: If fields are missing or the entry count is not n^2
    """
    try:
        n = int(obj['n'])
        entries = obj['entries']
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f'Matrix object needs "n" and "entries": {e}') from e
    if n <= 0 or len(entries) != n * n:
        raise InputError(f'Expected {n}x{n}={n * n} entries, got {len(entries)}')
    try:
        values = [complex(float(re), float(im)) for re, im in entries]
    except (TypeError, ValueError) as e:
        raise InputError(f'Entries must be [re, im] pairs: {e}') from e
    return as_matrix(np.array(values, dtype=complex).reshape(n, n))


def load_matrix(path: str) -> np.ndarray:
    """Read a matrix JSON file."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            obj = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f'Cannot read matrix file {path}: {e}') from e
    return matrix_from_dict(obj)


def save_matrix(A: Any, path: str):
    """Write a matrix JSON file; floats use shortest round-trip repr."""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(matrix_to_dict(A), f, indent=2)
