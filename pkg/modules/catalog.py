"""
Catalog Module

One checker per operator or numerical-radius inequality. Each checker
evaluates the hypothesis first, then computes both sides in the Loewner
order or as scalars and returns a Verdict. REGISTRY maps every stable case
id to its checker and to the generator recipe that satisfies its hypothesis.
"""

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from .errors import InputError, SingularMatrixError, UnknownCaseError
from .linalg_core import (DEFAULT_TOL, Tolerance, abs_op, adjoint, as_hermitian,
                          as_matrix, block_off_diag, eigvalsh, gram, gram_adjoint,
                          hermitian_norm, hermitian_part, identity, inverse,
                          is_psd, lambda_min, loewner_leq, matrix_from_dict,
                          matrix_to_dict, singular_values, spectral_norm,
                          sqrt_leq_equiv, sqrt_psd)
from .numrad import DEFAULT_EPS, Enclosure, basic_bounds, numerical_radius
from .transform import Window, accretive_via_disk, prop_checks
from .verdict import (RELATION_LOEWNER, RELATION_SCALAR, STATUS_BOUNDARY,
                      STATUS_FAIL, STATUS_PASS, Verdict, combine, not_met,
                      scalar_verdict)
from .window_solver import Variant, biaccretive_feasible, feasible_window, map_variant


CONVEX_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
MIXED_SCHWARZ_VECTORS = 100
IMPROVEMENT_BAND = 1e-12
SILVER_RATIO_SQUARED = 3 + 2 * math.sqrt(2)

VARIANT_TAGS = {
    'a': Variant.A,
    'iastar': Variant.IASTAR,
    'ainv': Variant.AINV,
}

FORM_MINUS = 'minus'
FORM_PLUS = 'plus'

MAP_VECTOR_STATE = 'vector_state'
MAP_COMPRESSION = 'compression'
MAP_TRACE = 'normalized_trace'


def _tag(variant: Variant) -> str:
    for tag, value in VARIANT_TAGS.items():
        if value is variant:
            return tag
    raise InputError(f'Variant {variant.value} has no catalog tag')


def _variant(value: Any) -> Variant:
    if isinstance(value, Variant):
        return value
    tag = str(value).lower()
    if tag in VARIANT_TAGS:
        return VARIANT_TAGS[tag]
    return Variant.parse(value)


@dataclass(frozen=True, eq=False)
class PositiveMapSpec:
    """A unital positive linear map: vector state, compression or normalized trace.

    Vector states and the normalized trace are represented with 1 x 1
    outputs; Phi(T) = <Tx, x> I carries the same information.
    """

    kind: str
    vector: Optional[np.ndarray] = None
    isometry: Optional[np.ndarray] = None

    @classmethod
    def vector_state(cls, x: Any) -> 'PositiveMapSpec':
        return cls(MAP_VECTOR_STATE, vector=np.asarray(x, dtype=complex))

    @classmethod
    def compression(cls, P: Any) -> 'PositiveMapSpec':
        return cls(MAP_COMPRESSION, isometry=np.asarray(P, dtype=complex))

    @classmethod
    def normalized_trace(cls) -> 'PositiveMapSpec':
        return cls(MAP_TRACE)

    @classmethod
    def parse(cls, text: str, n: int) -> 'PositiveMapSpec':
        """Parse 'trace', 'state[:j]' (basis vector e_j) or 'compress:k' (first k coordinates)."""
        name, _, arg = str(text).partition(':')
        name = name.strip().lower()
        try:
            if name in ('trace', MAP_TRACE):
                return cls.normalized_trace()
            if name in ('state', MAP_VECTOR_STATE):
                x = np.zeros(n, dtype=complex)
                x[int(arg or 0)] = 1.0
                return cls.vector_state(x)
            if name in ('compress', MAP_COMPRESSION):
                k = int(arg)
                return cls.compression(np.eye(n, dtype=complex)[:, :k])
        except (ValueError, IndexError) as e:
            raise InputError(f'Invalid positive map spec {text!r}: {e}') from e
        raise InputError(f'Unknown positive map kind {name!r}')

    def validate(self, n: int):
        """Raises InputError unless the map is a unital positive map on n x n matrices."""
        if self.kind == MAP_VECTOR_STATE:
            x = self.vector
            if x is None or x.shape != (n,):
                raise InputError(f'Vector state needs a vector of length {n}')
            if abs(np.linalg.norm(x) - 1.0) > 1e-12:
                raise InputError('Vector state needs a unit vector')
        elif self.kind == MAP_COMPRESSION:
            P = self.isometry
            if P is None or P.ndim != 2 or P.shape[0] != n or not 1 <= P.shape[1] <= n:
                raise InputError(f'Compression needs an n x k isometry with n = {n}')
            gap = np.linalg.norm(adjoint(P) @ P - np.eye(P.shape[1]))
            if gap > 1e-12:
                raise InputError(f'Compression columns are not orthonormal (gap {gap:.3e})')
        elif self.kind != MAP_TRACE:
            raise InputError(f'Unknown positive map kind {self.kind!r}')

    def apply(self, T: Any) -> np.ndarray:
        T = as_matrix(T)
        if self.kind == MAP_VECTOR_STATE:
            return as_matrix([[np.vdot(self.vector, T @ self.vector)]])
        if self.kind == MAP_COMPRESSION:
            return as_matrix(adjoint(self.isometry) @ T @ self.isometry)
        return as_matrix([[np.trace(T) / T.shape[0]]])

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'kind': self.kind}
        if self.vector is not None:
            out['vector'] = [[float(z.real), float(z.imag)] for z in self.vector]
        if self.isometry is not None:
            out['isometry'] = [[[float(z.real), float(z.imag)] for z in row] for row in self.isometry]
        return out

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> 'PositiveMapSpec':
        try:
            kind = obj['kind']
            vector = obj.get('vector')
            isometry = obj.get('isometry')
            return cls(
                kind,
                vector=None if vector is None else np.array([complex(re, im) for re, im in vector]),
                isometry=None if isometry is None else np.array(
                    [[complex(re, im) for re, im in row] for row in isometry]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f'Invalid positive map object: {e}') from e


@dataclass(frozen=True)
class TradeParam:
    """Convex-combination weight t in [0, 1]."""

    t: float

    def __post_init__(self):
        if not 0.0 <= float(self.t) <= 1.0:
            raise InputError(f't must lie in [0, 1], got {self.t}')
        object.__setattr__(self, 't', float(self.t))


@dataclass
class Instance:
    """Everything a catalog case may consume; replayable from JSON."""

    case_id: str
    A: np.ndarray
    window: Optional[Window] = None
    B: Optional[np.ndarray] = None
    window_b: Optional[Window] = None
    t: float = 0.5
    alpha: float = 1.0
    form: str = FORM_MINUS
    phi: Optional[PositiveMapSpec] = None
    seed: Optional[int] = None
    notes: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'case_id': self.case_id,
            'A': matrix_to_dict(self.A),
            'window': self.window.to_dict() if self.window else None,
            'B': matrix_to_dict(self.B) if self.B is not None else None,
            'window_b': self.window_b.to_dict() if self.window_b else None,
            't': self.t,
            'alpha': self.alpha,
            'form': self.form,
            'phi': self.phi.to_dict() if self.phi else None,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> 'Instance':
        try:
            return cls(
                case_id=obj['case_id'],
                A=matrix_from_dict(obj['A']),
                window=Window.from_dict(obj['window']) if obj.get('window') else None,
                B=matrix_from_dict(obj['B']) if obj.get('B') else None,
                window_b=Window.from_dict(obj['window_b']) if obj.get('window_b') else None,
                t=float(obj.get('t', 0.5)),
                alpha=float(obj.get('alpha', 1.0)),
                form=obj.get('form', FORM_MINUS),
                phi=PositiveMapSpec.from_dict(obj['phi']) if obj.get('phi') else None,
                seed=obj.get('seed'),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f'Invalid instance object: {e}') from e


def _attach(case_id: str, primary: Verdict, supporting: Iterable[Verdict] = (),
            informational: Iterable[Verdict] = (),
            details: Optional[Dict[str, Any]] = None) -> Verdict:
    """Primary verdict renamed to case_id; supporting parts can only make it fail."""
    supporting = list(supporting)
    parts = [primary] + supporting
    passed = all(v.passed for v in parts)
    if not passed:
        status = STATUS_FAIL
    elif any(v.status == STATUS_BOUNDARY for v in parts):
        status = STATUS_BOUNDARY
    else:
        status = STATUS_PASS
    info = dict(primary.details)
    info.update(details or {})
    return replace(primary, case_id=case_id, passed=passed, status=status, details=info,
                   sub_verdicts=supporting + list(informational))


def _gate_disk(A: np.ndarray, w: Window, variant: Variant,
               tol: Tolerance) -> Tuple[Optional[np.ndarray], Optional[str]]:
    """Mapped operator X when C_{M,m}(X) is accretive, else a reason."""
    try:
        X = map_variant(A, variant)
    except SingularMatrixError as e:
        return None, f'A is not invertible: {e}'
    if not accretive_via_disk(X, w, tol):
        return None, f'C_{{M,m}}({variant.value}) is not accretive'
    return X, None


def _gate_band(A: np.ndarray, w: Window, variant: Variant,
               tol: Tolerance) -> Tuple[Optional[np.ndarray], Optional[str]]:
    """Mapped operator X when C_{M,m}(|X|) is accretive, i.e. m <= sigma(X) <= M."""
    try:
        X = map_variant(A, variant)
    except SingularMatrixError as e:
        return None, f'A is not invertible: {e}'
    if not feasible_window(X, Variant.ABSA, w, tol):
        return None, f'C_{{M,m}}(|{variant.value}|) is not accretive'
    return X, None


def _is_invertible_psd(R: np.ndarray, tol: Tolerance) -> bool:
    return lambda_min(R) > tol.band(hermitian_norm(R))


# -- Section: operator inequalities -------------------------------------------

def _intermediate(X: np.ndarray, w: Window, tol: Tolerance, case_id: str) -> Verdict:
    n = X.shape[0]
    return loewner_leq(w.M * w.m * identity(n) + gram(X), (w.M + w.m) * hermitian_part(X),
                       tol, case_id)


def check_intermediate(A: Any, w: Window, variant: Any = Variant.A,
                       tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """(M+m) Re X >= Mm I + |X|^2 for the mapped operator X."""
    variant = _variant(variant)
    X, reason = _gate_disk(as_matrix(A), w, variant, tol)
    if reason:
        return not_met('eq.intermediate', RELATION_LOEWNER, reason)
    return _intermediate(X, w, tol, 'eq.intermediate')


def check_abs_vs_real(A: Any, w: Window, variant: Any = Variant.A,
                      tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """|X| <= K Re X for X = A, iA* or A^{-1}, under C_{M,m}(X) accretive.

    For X = iA* this reads |A*| <= K Im A. The intermediate inequality
    (M+m) Re X >= Mm I + |X|^2 is attached as a supporting sub-verdict.
    """
    variant = _variant(variant)
    case_id = f'thm.abs_real.{_tag(variant)}'
    X, reason = _gate_disk(as_matrix(A), w, variant, tol)
    if reason:
        return not_met(case_id, RELATION_LOEWNER, reason)
    K = w.K
    main = loewner_leq(abs_op(X), K * hermitian_part(X), tol, case_id)
    return _attach(case_id, main, [_intermediate(X, w, tol, 'eq.intermediate')],
                   details={'K': K, 'variant': variant.value})


def check_block_reverse_triangle(S: Any, T: Any, w: Window,
                                 tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """||S|| + ||T|| + | ||S|| - ||T|| | <= K ||S + T|| when C_{M,m}([[0, S], [T*, 0]]) is accretive.

    Re of the block has zero trace while the hypothesis forces it positive
    definite, so the gate never opens for a genuine window.
    """
    case_id = 'thm.block_triangle'
    S = as_matrix(S)
    T = as_matrix(T)
    block = block_off_diag(S, T)
    distance = spectral_norm(block - w.mu * identity(block.shape[0]))
    if not accretive_via_disk(block, w, tol):
        return not_met(case_id, RELATION_SCALAR, 'C_{M,m}(block) is not accretive',
                       details={'block_distance': distance, 'r': w.r})
    a = spectral_norm(S)
    b = spectral_norm(T)
    lhs = a + b + abs(a - b)
    rhs = w.K * spectral_norm(S + T)
    return scalar_verdict(case_id, lhs, rhs, tol.rel, details={
        'max_norm': max(a, b),
        'max_identity_residual': abs(max(a, b) - (a + b + abs(a - b)) / 2),
        'block_distance': distance,
    })


def check_abs_minus_real(A: Any, w: Window, variant: Any = Variant.A,
                         tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """|X| - Re X <= c1 ||X|| I under C_{M,m}(X) accretive.

    The companion lower bound 0 <= |X| - Re X is not implied by the
    hypothesis (A = I + 0.2 N with N nilpotent violates it inside the
    window (0.7, 1.3)); it is reported as informational.
    """
    variant = _variant(variant)
    case_id = f'cor.abs_minus_real.{_tag(variant)}'
    X, reason = _gate_disk(as_matrix(A), w, variant, tol)
    if reason:
        return not_met(case_id, RELATION_LOEWNER, reason)
    n = X.shape[0]
    D = abs_op(X) - hermitian_part(X)
    c1 = w.constants().c1
    norm = spectral_norm(X)
    upper = loewner_leq(D, c1 * norm * identity(n), tol, case_id)
    lower = loewner_leq(np.zeros((n, n)), D, tol, f'{case_id}.lower')
    return _attach(case_id, upper, informational=[lower], details={'c1': c1, 'norm': norm})


def check_convex_combo(A: Any, w: Window, t: float, tol: Tolerance = DEFAULT_TOL,
                       case_id: str = 'thm.convex_combo') -> Verdict:
    """(1-t)|A*| + t|A| <= K((1-t) Im A + t Re A) when C(A) and C(iA*) are accretive.

    |A*| and Im A are computed as |iA*| and Re(iA*) so that t = 0 and t = 1
    reproduce the thm.abs_real checks exactly.
    """
    t = TradeParam(t).t
    A = as_matrix(A)
    check = biaccretive_feasible(A, w, tol, partner=Variant.IASTAR)
    if not check:
        return not_met(case_id, RELATION_LOEWNER, 'C_{M,m}(A) and C_{M,m}(iA*) are not both accretive',
                       details=check.to_dict())
    X = map_variant(A, Variant.A)
    Y = map_variant(A, Variant.IASTAR)
    lhs = (1 - t) * abs_op(Y) + t * abs_op(X)
    rhs = w.K * ((1 - t) * hermitian_part(Y) + t * hermitian_part(X))
    return loewner_leq(lhs, rhs, tol, case_id, details={'t': t, 'K': w.K})


def check_convex_combo_batch(A: Any, w: Window, ts: Iterable[float] = CONVEX_GRID,
                             tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Convex-combination check over a grid of t values."""
    parts = [check_convex_combo(A, w, t, tol, case_id=f'thm.convex_combo.t{t:g}') for t in ts]
    return combine('thm.convex_combo', parts)


def squared_certificate(w: Window, values: np.ndarray) -> Dict[str, float]:
    """f(t) = K^2 t^2 - (M+m) t + Mm on the given eigenvalues, and at its root 2Mm/(M+m)."""
    K2 = w.K ** 2
    s = w.M + w.m
    p = w.M * w.m
    root = 2 * p / s
    f_values = K2 * values ** 2 - s * values + p
    return {
        'certificate_min': float(np.min(f_values)),
        'certificate_root': root,
        'certificate_root_value': K2 * root ** 2 - s * root + p,
    }


def check_squared(A: Any, w: Window, variant: Any = Variant.A,
                  tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """|X|^2 <= K^2 (Re X)^2 under C_{M,m}(X) accretive."""
    variant = _variant(variant)
    case_id = f'thm.squared.{_tag(variant)}'
    X, reason = _gate_disk(as_matrix(A), w, variant, tol)
    if reason:
        return not_met(case_id, RELATION_LOEWNER, reason)
    R = hermitian_part(X)
    details = squared_certificate(w, eigvalsh(R))
    return loewner_leq(gram(X), w.K ** 2 * (R @ R), tol, case_id, details=details)


def check_sqrt_equiv(X: Any, Y: Any, alpha: float, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """X <= alpha Y  <=>  ||X^(1/2) Y^(-1/2)|| <= sqrt(alpha) for PSD X and PD Y."""
    case_id = 'lem.sqrt_equiv'
    X = as_hermitian(X)
    Y = as_hermitian(Y)
    if not is_psd(X, tol):
        return not_met(case_id, RELATION_SCALAR, 'X is not positive semidefinite')
    if not _is_invertible_psd(Y, tol):
        return not_met(case_id, RELATION_SCALAR, 'Y is not positive definite')
    return sqrt_leq_equiv(X, Y, alpha, tol, case_id)


def _anticommutator_parts(X: np.ndarray, tol: Tolerance) -> Tuple[Optional[Dict[str, np.ndarray]], Optional[str]]:
    R = hermitian_part(X)
    if not _is_invertible_psd(R, tol):
        return None, 'real part is not invertible'
    R_inv = as_hermitian(inverse(R))
    absX = abs_op(X)
    S = as_hermitian(absX @ R_inv + R_inv @ absX)
    return {'R': R, 'R_inv': R_inv, 'abs': absX, 'S': S}, None


def check_anticommutator(A: Any, w: Window, variant: Any = Variant.A,
                         tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """|X| R^{-1} + R^{-1} |X| <= 2K I and its absolute value, with R = Re X.

    The endpoint of the squaring chain, R^2 >= K^{-2} |X|^2, is a supporting
    sub-verdict.
    """
    variant = _variant(variant)
    case_id = f'cor.anticommutator.{_tag(variant)}'
    X, reason = _gate_disk(as_matrix(A), w, variant, tol)
    if reason:
        return not_met(case_id, RELATION_LOEWNER, reason)
    parts, reason = _anticommutator_parts(X, tol)
    if reason:
        return not_met(case_id, RELATION_LOEWNER, reason)
    n = X.shape[0]
    bound = (w.M + w.m) / math.sqrt(w.M * w.m)
    S = parts['S']
    R = parts['R']
    return combine(case_id, [
        loewner_leq(S, bound * identity(n), tol, f'{case_id}.anticommutator'),
        loewner_leq(abs_op(S), bound * identity(n), tol, f'{case_id}.abs'),
        loewner_leq(w.constants().lowK ** 2 * gram(X), R @ R, tol, f'{case_id}.squared_real'),
    ], details={'bound': bound, 'anticommutator_norm': hermitian_norm(S)})


def check_sandwich(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Chain through c = || |A| (Re A)^{-2} |A| ||: c <= K^2 and (Re A)^2 >= |A|^2 / c.

    The step c <= ||S||^2 / 4 (S the anticommutator) treats the factors as
    positive operators, which they are not in general; it is informational.
    """
    case_id = 'rem.sandwich'
    X, reason = _gate_disk(as_matrix(A), w, Variant.A, tol)
    if reason:
        return not_met(case_id, RELATION_SCALAR, reason)
    parts, reason = _anticommutator_parts(X, tol)
    if reason:
        return not_met(case_id, RELATION_SCALAR, reason)
    sigma = singular_values(X)
    if not sigma[0] > tol.band(sigma[-1]):
        return not_met(case_id, RELATION_SCALAR, '|A| is not invertible')

    R = parts['R']
    R_inv = parts['R_inv']
    absX = parts['abs']
    Z = as_hermitian(absX @ R_inv @ R_inv @ absX)
    c = hermitian_norm(Z)
    s_norm = hermitian_norm(parts['S'])
    G = gram(X)
    R2 = R @ R
    return combine(case_id, [
        scalar_verdict(f'{case_id}.norm', c, w.K ** 2, tol.rel),
        loewner_leq(G / c, R2, tol, f'{case_id}.inverse'),
        loewner_leq(w.constants().lowK ** 2 * G, R2, tol, f'{case_id}.endpoint'),
    ], informational=[
        scalar_verdict(f'{case_id}.product_norm', c, 0.25 * s_norm ** 2, tol.rel),
    ], details={'sandwich_norm': c, 'anticommutator_norm': s_norm})


def check_positive_map_reverse(A: Any, phi: PositiveMapSpec,
                               tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Phi(|A|) <= Phi(|A|^2)^(1/2), unconditional."""
    A = as_matrix(A)
    phi.validate(A.shape[0])
    root = sqrt_psd(phi.apply(gram(A)), tol)
    return loewner_leq(phi.apply(abs_op(A)), root, tol, 'ineq.posmap_reverse',
                       details={'map': phi.kind})


def check_positive_map(A: Any, w: Window, phi: PositiveMapSpec,
                       tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Phi(|A|^2)^(1/2) <= K Phi(|A|) when C_{M,m}(|A|) is accretive.

    The unconditional reverse inequality is attached as a sub-verdict; it
    only counts towards the status once the hypothesis holds.
    """
    case_id = 'lem.posmap'
    A = as_matrix(A)
    phi.validate(A.shape[0])
    reverse = check_positive_map_reverse(A, phi, tol)
    _, reason = _gate_band(A, w, Variant.A, tol)
    if reason:
        return replace(not_met(case_id, RELATION_LOEWNER, reason), sub_verdicts=[reverse])
    root = sqrt_psd(phi.apply(gram(A)), tol)
    lemma = loewner_leq(root, w.K * phi.apply(abs_op(A)), tol, case_id)
    return _attach(case_id, lemma, supporting=[reverse], details={'map': phi.kind, 'K': w.K})


def check_reverse(A: Any, w: Window, variant: Any = Variant.A,
                  tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Re X <= K |X| when C_{M,m}(|X|) is accretive.

    The additive form from check_real_minus_abs rides along as an
    informational sub-verdict.
    """
    variant = _variant(variant)
    case_id = f'thm.reverse.{_tag(variant)}'
    X, reason = _gate_band(as_matrix(A), w, variant, tol)
    if reason:
        return not_met(case_id, RELATION_LOEWNER, reason)
    main = loewner_leq(hermitian_part(X), w.K * abs_op(X), tol, case_id)
    return _attach(case_id, main, informational=[check_real_minus_abs(A, w, variant, tol)],
                   details={'K': w.K})


def check_real_minus_abs(A: Any, w: Window, variant: Any = Variant.A,
                         tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Re X - |X| <= (M-m)^2/(2 sqrt(Mm)) ||A|| I when C_{M,m}(|X|) is accretive.

    The constant is not scale invariant; it dominates the tight constant
    K - 1 whenever (sqrt(M) + sqrt(m))^2 >= 1. The tight form is
    informational.
    """
    variant = _variant(variant)
    case_id = f'cor.real_minus_abs.{_tag(variant)}'
    A = as_matrix(A)
    X, reason = _gate_band(A, w, variant, tol)
    if reason:
        return not_met(case_id, RELATION_LOEWNER, reason)
    n = X.shape[0]
    D = hermitian_part(X) - abs_op(X)
    consts = w.constants()
    norm = spectral_norm(A)
    main = loewner_leq(D, consts.c2 * norm * identity(n), tol, case_id)
    tight = loewner_leq(D, consts.c2_tight * norm * identity(n), tol, f'{case_id}.tight')
    return _attach(case_id, main, informational=[tight], details={
        'c2': consts.c2,
        'c2_tight': consts.c2_tight,
        'scale_condition': (math.sqrt(w.M) + math.sqrt(w.m)) ** 2 >= 1.0,
    })


# -- Section: numerical radius inequalities -----------------------------------

def check_w_bounds(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL,
                   eps: float = DEFAULT_EPS, omega: Optional[Enclosure] = None) -> List[Verdict]:
    """Four bounds under C_{M,m}(A) accretive.

    w(A) <= K ||Re A||, w(A) - ||Re A|| <= c1 w(A), ||A|| <= K w(A) and
    ||A|| - w(A) <= c1 ||A||.
    """
    ids = ('w.vs_real.upper', 'w.vs_real.gap', 'norm.vs_w.upper', 'norm.vs_w.gap')
    A = as_matrix(A)
    if not accretive_via_disk(A, w, tol):
        return [not_met(case_id, RELATION_SCALAR, 'C_{M,m}(A) is not accretive') for case_id in ids]
    om = omega or numerical_radius(A, eps)
    consts = w.constants()
    K, c1 = consts.K, consts.c1
    re_norm = hermitian_norm(hermitian_part(A))
    norm = spectral_norm(A)
    details = {
        'omega': om.to_dict(),
        'K': K,
        'refines_half_norm': K < 2,
        'lowK_norm': consts.lowK * norm,
        'half_norm': norm / 2,
    }
    return [
        scalar_verdict(ids[0], om.hi, K * re_norm, tol.rel, allowance=om.width, details=details),
        scalar_verdict(ids[1], om.hi - re_norm, c1 * om.hi, tol.rel, allowance=om.width, details=details),
        scalar_verdict(ids[2], norm, K * om.lo, tol.rel, allowance=K * om.width, details=details),
        scalar_verdict(ids[3], norm - om.lo, c1 * norm, tol.rel, allowance=om.width, details=details),
    ]


def check_w_vs_real(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL,
                    eps: float = DEFAULT_EPS) -> Verdict:
    return combine('w.vs_real', check_w_bounds(A, w, tol, eps)[:2])


def check_norm_vs_w(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL,
                    eps: float = DEFAULT_EPS) -> Verdict:
    return combine('norm.vs_w', check_w_bounds(A, w, tol, eps)[2:])


def check_mixed_schwarz(A: Any, rng: Optional[np.random.Generator] = None,
                        count: int = MIXED_SCHWARZ_VECTORS,
                        tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """|<Ax, x>| <= sqrt(<|A|x, x> <|A*|x, x>) on random unit vectors; reports the tightest."""
    A = as_matrix(A)
    rng = rng if rng is not None else np.random.Generator(np.random.PCG64(0))
    n = A.shape[0]
    absA = abs_op(A)
    absAs = abs_op(adjoint(A))
    worst = None
    for index in range(count):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = x / np.linalg.norm(x)
        lhs = abs(np.vdot(x, A @ x))
        rhs = math.sqrt(max(np.vdot(x, absA @ x).real, 0.0) * max(np.vdot(x, absAs @ x).real, 0.0))
        verdict = scalar_verdict('prop.mixed_schwarz', lhs, rhs, tol.rel,
                                 details={'vectors': count, 'worst_index': index})
        if worst is None or verdict.normalized_slack < worst.normalized_slack:
            worst = verdict
    return worst


def check_w_geo_mean(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL, eps: float = DEFAULT_EPS,
                     rng: Optional[np.random.Generator] = None) -> Verdict:
    """w(A) <= K sqrt(||Re A|| ||Im A||) when C(A) and C(iA*) are accretive."""
    case_id = 'w.geo_mean'
    A = as_matrix(A)
    check = biaccretive_feasible(A, w, tol, partner=Variant.IASTAR)
    if not check:
        return not_met(case_id, RELATION_SCALAR, 'C_{M,m}(A) and C_{M,m}(iA*) are not both accretive',
                       details=check.to_dict())
    om = numerical_radius(A, eps)
    re_norm = hermitian_norm(hermitian_part(A))
    im_norm = hermitian_norm(hermitian_part(map_variant(A, Variant.IASTAR)))
    main = scalar_verdict(case_id, om.hi, w.K * math.sqrt(re_norm * im_norm), tol.rel,
                          allowance=om.width, details={'omega': om.to_dict()})
    return _attach(case_id, main, [check_mixed_schwarz(A, rng, tol=tol)])


def improvement_forms_lower_sq(w: Window) -> Dict[str, bool]:
    """Three algebraic forms of 'the squared lower bound beats the constant 1/4'."""
    M, m = w.M, w.m
    ratio = M / m
    sq = w.constants().sq
    return {
        'sq_form': sq >= 0.25,
        'product_form': M * m >= 0.25 * (M - m) ** 2,
        'ratio_form': ratio <= SILVER_RATIO_SQUARED,
        'boundary': abs(ratio - SILVER_RATIO_SQUARED) <= IMPROVEMENT_BAND * SILVER_RATIO_SQUARED,
    }


def check_w_lower_sq(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL,
                     eps: float = DEFAULT_EPS) -> Verdict:
    """2Mm/(M+m)^2 || |A|^2 + |A*|^2 || <= w(A)^2 under C_{M,m}(A) accretive."""
    case_id = 'w.lower_sq'
    A = as_matrix(A)
    if not accretive_via_disk(A, w, tol):
        return not_met(case_id, RELATION_SCALAR, 'C_{M,m}(A) is not accretive')
    om = numerical_radius(A, eps)
    sq = w.constants().sq
    total = hermitian_norm(gram(A) + gram_adjoint(A))
    forms = improvement_forms_lower_sq(w)
    return scalar_verdict(case_id, sq * total, om.lo ** 2, tol.rel,
                          allowance=om.width * (om.lo + om.hi), details={
                              'omega': om.to_dict(),
                              'sq': sq,
                              'improves_quarter': forms['sq_form'],
                              'forms': forms,
                          })


def improvement_forms_product(wA: Window, wB: Window) -> Dict[str, bool]:
    """K_A K_B < 4 against the expanded condition on (M, m, N, n)."""
    M, m, N, n = wA.M, wA.m, wB.M, wB.m
    product = wA.K * wB.K
    root = math.sqrt(M * N * m * n)
    expanded = (math.sqrt(M * N) - math.sqrt(m * n)) ** 2 + (math.sqrt(M * n) - math.sqrt(N * m)) ** 2
    return {
        'k_form': product < 4.0,
        'expanded_form': expanded <= 12.0 * root,
        'boundary': abs(product - 4.0) <= IMPROVEMENT_BAND * 4.0,
    }


def check_w_product(A: Any, B: Any, wA: Window, wB: Window, tol: Tolerance = DEFAULT_TOL,
                    eps: float = DEFAULT_EPS) -> Verdict:
    """w(AB) <= K_A K_B w(A) w(B) when C_{M,m}(A) and C_{N,n}(B) are accretive."""
    case_id = 'w.product'
    A = as_matrix(A)
    B = as_matrix(B)
    if not accretive_via_disk(A, wA, tol):
        return not_met(case_id, RELATION_SCALAR, 'C_{M,m}(A) is not accretive')
    if not accretive_via_disk(B, wB, tol):
        return not_met(case_id, RELATION_SCALAR, 'C_{N,n}(B) is not accretive')
    om_ab = numerical_radius(A @ B, eps)
    om_a = numerical_radius(A, eps)
    om_b = numerical_radius(B, eps)
    constant = wA.K * wB.K
    allowance = om_ab.width + constant * (om_a.hi * om_b.hi - om_a.lo * om_b.lo)
    forms = improvement_forms_product(wA, wB)
    return scalar_verdict(case_id, om_ab.hi, constant * om_a.lo * om_b.lo, tol.rel,
                          allowance=allowance, details={
                              'constant': constant,
                              'improves_four': forms['k_form'],
                              'forms': forms,
                          })


def _commutator_verdict(case_id: str, C: np.ndarray, om_b: Enclosure, diff: float,
                        tol: Tolerance, eps: float, details: Dict[str, Any]) -> Verdict:
    om_c = numerical_radius(C, eps)
    info = dict(details)
    info['omega_b'] = om_b.to_dict()
    return scalar_verdict(case_id, om_c.hi, diff * om_b.lo, tol.rel,
                          allowance=om_c.width + diff * om_b.width, details=info)


def check_w_commutator(A: Any, B: Any, w: Window, form: str = FORM_MINUS,
                       tol: Tolerance = DEFAULT_TOL, eps: float = DEFAULT_EPS) -> Verdict:
    """w(AB - BA*) <= (M-m) w(B) under C(A) accretive, or the plus form under C(iA) accretive.

    The plus form substitutes iA: w(AB + BA*) <= (M-m) w(B). The variant
    with B*A in place of BA* is evaluated as informational; it fails for
    A = -i mu I and B = I.
    """
    if form not in (FORM_MINUS, FORM_PLUS):
        raise InputError(f'form must be "minus" or "plus", got {form!r}')
    case_id = f'w.commutator.{form}'
    A = as_matrix(A)
    B = as_matrix(B)
    gate_variant = Variant.A if form == FORM_MINUS else Variant.IA
    X, reason = _gate_disk(A, w, gate_variant, tol)
    if reason:
        return not_met(case_id, RELATION_SCALAR, reason)
    norm = spectral_norm(A)
    diff = w.constants().diff
    details = {'baseline_factor': 2 * norm, 'improvement_margin': 2 * norm - diff}
    As = adjoint(A)
    om_b = numerical_radius(B, eps)
    if form == FORM_MINUS:
        return _commutator_verdict(case_id, A @ B - B @ As, om_b, diff, tol, eps, details)
    main = _commutator_verdict(case_id, A @ B + B @ As, om_b, diff, tol, eps, details)
    printed = _commutator_verdict(f'{case_id}.printed', A @ B + adjoint(B) @ A, om_b, diff, tol, eps, {})
    return _attach(case_id, main, informational=[printed])


def _final_verdict(case_id: str, om_ab: Enclosure, P: np.ndarray, Q: np.ndarray, om_b: Enclosure,
                   diff: float, tol: Tolerance, eps: float) -> Verdict:
    om_p = numerical_radius(P, eps)
    om_q = numerical_radius(Q, eps)
    spread = max(abs(om_p.hi - om_q.lo), abs(om_q.hi - om_p.lo))
    lhs = om_ab.hi + 0.5 * spread
    allowance = om_ab.width + 0.5 * (om_p.width + om_q.width) + diff * om_b.width
    return scalar_verdict(case_id, lhs, diff * om_b.lo, tol.rel, allowance=allowance, details={
        'omega_ab': om_ab.to_dict(),
        'max_pq': max(om_p.hi, om_q.hi),
        'omega_plus': om_p.to_dict(),
        'omega_minus': om_q.to_dict(),
    })


def check_final_corollary(A: Any, B: Any, w: Window, tol: Tolerance = DEFAULT_TOL,
                          eps: float = DEFAULT_EPS) -> Verdict:
    """w(AB) + |w(P) - w(Q)|/2 <= (M-m) w(B) when C(A) and C(iA) are accretive.

    P = AB + BA* and Q = AB - BA*. The form with B*A is informational; it
    fails for A = cI, B = iI once |c| exceeds r.
    """
    case_id = 'cor.final'
    A = as_matrix(A)
    B = as_matrix(B)
    _, reason = _gate_disk(A, w, Variant.A, tol)
    if not reason:
        _, reason = _gate_disk(A, w, Variant.IA, tol)
    if reason:
        return not_met(case_id, RELATION_SCALAR, reason)
    diff = w.constants().diff
    AB = A @ B
    As = adjoint(A)
    Bs = adjoint(B)
    om_ab = numerical_radius(AB, eps)
    om_b = numerical_radius(B, eps)
    main = _final_verdict(case_id, om_ab, AB + B @ As, AB - B @ As, om_b, diff, tol, eps)
    printed = _final_verdict(f'{case_id}.printed', om_ab, AB + Bs @ A, AB - Bs @ A, om_b, diff, tol, eps)
    return _attach(case_id, main, informational=[printed])


def check_norm_product(X: Any, Y: Any, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """||XY|| <= ||X + Y||^2 / 4 for PSD X, Y."""
    case_id = 'prop.norm_product'
    X = as_hermitian(X)
    Y = as_hermitian(Y)
    if not (is_psd(X, tol) and is_psd(Y, tol)):
        return not_met(case_id, RELATION_SCALAR, 'operands are not both positive semidefinite')
    return scalar_verdict(case_id, spectral_norm(X @ Y), 0.25 * hermitian_norm(X + Y) ** 2, tol.rel)


# -- Registry ------------------------------------------------------------------

Evaluator = Callable[[Instance, Tolerance, float], Verdict]


@dataclass(frozen=True)
class CatalogCase:
    """A registry entry: checker plus the generator recipe satisfying its hypothesis."""

    case_id: str
    summary: str
    recipe: str
    evaluate: Evaluator
    needs_window: bool = True
    needs_b: bool = False
    needs_window_b: bool = False


def _rng_for(inst: Instance) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(inst.seed if inst.seed is not None else 0))


def _prop_case(index: int) -> Evaluator:
    return lambda inst, tol, eps: prop_checks(inst.A, inst.window, tol)[index - 1]


def _build_registry() -> Mapping[str, CatalogCase]:
    cases: List[CatalogCase] = []
    for k in range(1, 8):
        recipe = {6: 'disk', 7: 'disk_dissipative'}.get(k, 'unrestricted_window')
        cases.append(CatalogCase(f'prop.{k}', f'transform property ({k})', recipe, _prop_case(k)))

    cases.append(CatalogCase(
        'eq.intermediate', '(M+m) Re A >= Mm I + |A|^2', 'disk',
        lambda inst, tol, eps: check_intermediate(inst.A, inst.window, Variant.A, tol)))

    for tag, variant in VARIANT_TAGS.items():
        recipe = 'disk' if tag == 'a' else f'disk_{tag}'
        cases.append(CatalogCase(
            f'thm.abs_real.{tag}', '|X| <= K Re X', recipe,
            lambda inst, tol, eps, v=variant: check_abs_vs_real(inst.A, inst.window, v, tol)))
        cases.append(CatalogCase(
            f'cor.abs_minus_real.{tag}', '|X| - Re X <= c1 ||X|| I', recipe,
            lambda inst, tol, eps, v=variant: check_abs_minus_real(inst.A, inst.window, v, tol)))
        cases.append(CatalogCase(
            f'thm.squared.{tag}', '|X|^2 <= K^2 (Re X)^2', recipe,
            lambda inst, tol, eps, v=variant: check_squared(inst.A, inst.window, v, tol)))
        band_recipe = 'band' if tag == 'a' else f'band_{tag}'
        cases.append(CatalogCase(
            f'thm.reverse.{tag}', 'Re X <= K |X|', band_recipe,
            lambda inst, tol, eps, v=variant: check_reverse(inst.A, inst.window, v, tol)))

    for tag in ('a', 'iastar'):
        variant = VARIANT_TAGS[tag]
        recipe = 'disk' if tag == 'a' else f'disk_{tag}'
        cases.append(CatalogCase(
            f'cor.anticommutator.{tag}', '|X| R^-1 + R^-1 |X| <= 2K I', recipe,
            lambda inst, tol, eps, v=variant: check_anticommutator(inst.A, inst.window, v, tol)))
        band_recipe = 'band' if tag == 'a' else f'band_{tag}'
        cases.append(CatalogCase(
            f'cor.real_minus_abs.{tag}', 'Re X - |X| <= c2 ||A|| I', band_recipe,
            lambda inst, tol, eps, v=variant: check_real_minus_abs(inst.A, inst.window, v, tol)))

    cases.extend([
        CatalogCase('thm.block_triangle', 'reverse triangle inequality for off-diagonal blocks', 'block',
                    lambda inst, tol, eps: check_block_reverse_triangle(inst.A, inst.B, inst.window, tol),
                    needs_b=True),
        CatalogCase('thm.convex_combo', 'convex combination of |A*|, |A| against Im A, Re A', 'bidisk_iastar',
                    lambda inst, tol, eps: check_convex_combo(inst.A, inst.window, inst.t, tol)),
        CatalogCase('lem.sqrt_equiv', 'X <= alpha Y iff ||X^1/2 Y^-1/2|| <= sqrt(alpha)', 'sqrt_equiv',
                    lambda inst, tol, eps: check_sqrt_equiv(inst.A, inst.B, inst.alpha, tol),
                    needs_window=False, needs_b=True),
        CatalogCase('rem.sandwich', 'squaring chain through || |A| R^-2 |A| ||', 'disk',
                    lambda inst, tol, eps: check_sandwich(inst.A, inst.window, tol)),
        CatalogCase('lem.posmap', 'Phi(|A|^2)^1/2 <= K Phi(|A|)', 'band',
                    lambda inst, tol, eps: check_positive_map(
                        inst.A, inst.window, inst.phi or PositiveMapSpec.normalized_trace(), tol)),
        CatalogCase('ineq.posmap_reverse', 'Phi(|A|^2)^1/2 >= Phi(|A|)', 'unrestricted',
                    lambda inst, tol, eps: check_positive_map_reverse(
                        inst.A, inst.phi or PositiveMapSpec.normalized_trace(), tol),
                    needs_window=False),
        CatalogCase('w.basic_bounds', '||A||/2 <= w(A) <= ||A||, ||Re A||, ||Im A|| <= w(A)', 'unrestricted',
                    lambda inst, tol, eps: combine('w.basic_bounds', basic_bounds(inst.A, tol, eps)),
                    needs_window=False),
        CatalogCase('w.vs_real', 'w(A) against K ||Re A||', 'disk',
                    lambda inst, tol, eps: check_w_vs_real(inst.A, inst.window, tol, eps)),
        CatalogCase('norm.vs_w', '||A|| against K w(A)', 'disk',
                    lambda inst, tol, eps: check_norm_vs_w(inst.A, inst.window, tol, eps)),
        CatalogCase('w.geo_mean', 'w(A) <= K sqrt(||Re A|| ||Im A||)', 'bidisk_iastar',
                    lambda inst, tol, eps: check_w_geo_mean(inst.A, inst.window, tol, eps, _rng_for(inst))),
        CatalogCase('w.lower_sq', 'sq || |A|^2 + |A*|^2 || <= w(A)^2', 'disk',
                    lambda inst, tol, eps: check_w_lower_sq(inst.A, inst.window, tol, eps)),
        CatalogCase('w.product', 'w(AB) <= K_A K_B w(A) w(B)', 'disk_product',
                    lambda inst, tol, eps: check_w_product(inst.A, inst.B, inst.window, inst.window_b, tol, eps),
                    needs_b=True, needs_window_b=True),
        CatalogCase('w.commutator.minus', 'w(AB - BA*) <= (M-m) w(B)', 'commutator_minus',
                    lambda inst, tol, eps: check_w_commutator(inst.A, inst.B, inst.window, FORM_MINUS, tol, eps),
                    needs_b=True),
        CatalogCase('w.commutator.plus', 'w(AB + BA*) <= (M-m) w(B)', 'commutator_plus',
                    lambda inst, tol, eps: check_w_commutator(inst.A, inst.B, inst.window, FORM_PLUS, tol, eps),
                    needs_b=True),
        CatalogCase('cor.final', 'w(AB) + |w(P) - w(Q)|/2 <= (M-m) w(B)', 'bidisk_ia_pair',
                    lambda inst, tol, eps: check_final_corollary(inst.A, inst.B, inst.window, tol, eps),
                    needs_b=True),
        CatalogCase('prop.mixed_schwarz', '|<Ax,x>| <= sqrt(<|A|x,x><|A*|x,x>)', 'unrestricted',
                    lambda inst, tol, eps: check_mixed_schwarz(inst.A, _rng_for(inst), tol=tol),
                    needs_window=False),
        CatalogCase('prop.norm_product', '||XY|| <= ||X+Y||^2/4 for PSD X, Y', 'psd_pair',
                    lambda inst, tol, eps: check_norm_product(inst.A, inst.B, tol),
                    needs_window=False, needs_b=True),
    ])
    return MappingProxyType({case.case_id: case for case in cases})


REGISTRY: Mapping[str, CatalogCase] = _build_registry()


def get_case(case_id: str) -> CatalogCase:
    try:
        return REGISTRY[case_id]
    except KeyError:
        raise UnknownCaseError(f'Unknown case id {case_id!r}') from None


def evaluate_case(case_id: str, instance: Instance, tol: Tolerance = DEFAULT_TOL,
                  eps: float = DEFAULT_EPS) -> Verdict:
    """Run one registry case on an instance.

    Raises:
        UnknownCaseError: If the case id is not registered
        InputError: If the instance lacks an operand the case needs
    """
    case = get_case(case_id)
    if case.needs_window and instance.window is None:
        raise InputError(f'Case {case_id} needs a window')
    if case.needs_b and instance.B is None:
        raise InputError(f'Case {case_id} needs a second matrix B')
    if case.needs_window_b and instance.window_b is None:
        raise InputError(f'Case {case_id} needs a second window')
    if instance.B is not None and as_matrix(instance.B).shape != as_matrix(instance.A).shape:
        raise InputError('A and B must have the same dimension')
    return case.evaluate(instance, tol, eps)
