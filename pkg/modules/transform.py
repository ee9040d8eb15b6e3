"""
Transform Module

The transform C_{M,m}(A) = (MI - A*)(A - mI), the (m, M) window and its
derived constants, accretivity predicates and the seven elementary
properties of the transform.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import InputError, InvalidWindowError
from .linalg_core import (DEFAULT_TOL, Tolerance, abs_op, adjoint, as_matrix,
                          eig_hermitian, gram, gram_adjoint, hermitian_part,
                          identity, imaginary_part, loewner_leq,
                          singular_values, spectral_norm)
from .verdict import (RELATION_LOEWNER, RELATION_SCALAR, Verdict, combine,
                      equivalence_verdict, not_met, scalar_verdict)


IDENTITY_TOL = 1e-12
VANISH_TOL = 1e-10


@dataclass(frozen=True)
class WindowConstants:
    """Constants derived from a window (m, M)."""

    mu: float
    r: float
    K: float
    diff: float
    c1: float
    c2: float
    lowK: float
    sq: float

    @property
    def c2_tight(self) -> float:
        """(sqrt(M) - sqrt(m))^2 / (2 sqrt(Mm)), equal to K - 1."""
        return self.K - 1.0


@dataclass(frozen=True)
class Window:
    """The pair (m, M) with 0 < m < M."""

    m: float
    M: float

    def __post_init__(self):
        m, M = float(self.m), float(self.M)
        if not (math.isfinite(m) and math.isfinite(M)):
            raise InvalidWindowError(f'Window bounds must be finite, got ({m}, {M})')
        if not 0 < m < M:
            raise InvalidWindowError(f'Window requires 0 < m < M, got ({m}, {M})')
        object.__setattr__(self, 'm', m)
        object.__setattr__(self, 'M', M)

    @classmethod
    def from_center(cls, mu: float, r: float) -> 'Window':
        return cls(mu - r, mu + r)

    @classmethod
    def parse(cls, text: str) -> 'Window':
        """Parse 'm,M' as given on the command line."""
        try:
            m_text, M_text = text.split(',')
            return cls(float(m_text), float(M_text))
        except ValueError as e:
            raise InputError(f'Window must be "m,M", got {text!r}') from e

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> 'Window':
        try:
            return cls(float(obj['m']), float(obj['M']))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f'Window object needs "m" and "M": {e}') from e

    def to_dict(self) -> Dict[str, float]:
        return {'m': self.m, 'M': self.M}

    @property
    def mu(self) -> float:
        return (self.M + self.m) / 2

    @property
    def r(self) -> float:
        return (self.M - self.m) / 2

    @property
    def K(self) -> float:
        return (self.M + self.m) / (2 * math.sqrt(self.M * self.m))

    def constants(self) -> WindowConstants:
        M, m = self.M, self.m
        root = math.sqrt(M * m)
        return WindowConstants(
            mu=(M + m) / 2,
            r=(M - m) / 2,
            K=(M + m) / (2 * root),
            diff=M - m,
            c1=(math.sqrt(M) - math.sqrt(m)) ** 2 / (M + m),
            c2=(M - m) ** 2 / (2 * root),
            lowK=2 * root / (M + m),
            sq=2 * M * m / (M + m) ** 2,
        )


def transform_C(A: Any, w: Window) -> np.ndarray:
    """C_{M,m}(A) = (MI - A*)(A - mI)."""
    A = as_matrix(A)
    I = identity(A.shape[0])
    return as_matrix((w.M * I - adjoint(A)) @ (A - w.m * I))


def is_accretive(X: Any, tol: Tolerance = DEFAULT_TOL, strict: bool = False) -> bool:
    """Re X >= 0 (or lambda_min(Re X) > tol when strict, for generators)."""
    values = eig_hermitian(hermitian_part(X)).values
    band = tol.band(values[0], values[-1])
    return bool(values[0] > band) if strict else bool(values[0] >= -band)


def is_dissipative(X: Any, tol: Tolerance = DEFAULT_TOL, strict: bool = False) -> bool:
    """Im X >= 0."""
    values = eig_hermitian(imaginary_part(X)).values
    band = tol.band(values[0], values[-1])
    return bool(values[0] > band) if strict else bool(values[0] >= -band)


def accretive_via_disk(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL) -> bool:
    """||A - mu I|| <= r, equivalent to accretivity of C_{M,m}(A).

    Re C_{M,m}(A) + |A - mu I|^2 = r^2 I, so Re C >= 0 exactly when the
    spectral-norm distance from A to mu I is at most r.
    """
    A = as_matrix(A)
    distance = spectral_norm(A - w.mu * identity(A.shape[0]))
    return bool(distance <= w.r + tol.band(w.r))


def identity_residual(A: Any, w: Window) -> float:
    """||Re C_{M,m}(A) + |A - mu I|^2 - r^2 I|| (spectral norm)."""
    A = as_matrix(A)
    n = A.shape[0]
    shifted = A - w.mu * identity(n)
    residual = hermitian_part(transform_C(A, w)) + adjoint(shifted) @ shifted - w.r ** 2 * identity(n)
    return spectral_norm(residual)


def identity_scale(A: Any, w: Window) -> float:
    """Magnitude of the products entering the transform identities."""
    norm = spectral_norm(A)
    return max(1.0, w.r ** 2, norm ** 2, (w.M + norm) * (norm + w.m))


def _margin_band(values: np.ndarray, tol: Tolerance) -> float:
    return 4 * tol.band(values[0], values[-1])


def prop_checks(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL) -> List[Verdict]:
    """The seven elementary properties of C_{M,m}, one verdict each (prop.1 .. prop.7).

    Equivalences are checked as two implications with a tolerance dead-band;
    one-way implications whose premise fails are reported as hypothesis not
    met, with a flag when the instance is a counterexample to the converse.
    """
    A = as_matrix(A)
    n = A.shape[0]
    I = identity(n)
    scale = identity_scale(A, w)
    C = transform_C(A, w)
    C_adj = adjoint(C)
    vanish = VANISH_TOL * scale
    verdicts = []

    # (1) C(A*) - C*(A) = |A|^2 - |A*|^2; vanishes iff A is normal
    D1 = transform_C(adjoint(A), w) - C_adj
    commutator = gram(A) - gram_adjoint(A)
    residual1 = spectral_norm(D1 - commutator)
    gap1 = spectral_norm(D1)
    normal_gap = spectral_norm(commutator)
    near1 = any(0.01 * vanish <= x <= 100 * vanish for x in (gap1, normal_gap))
    verdicts.append(combine('prop.1', [
        scalar_verdict('prop.1.identity', residual1, 0.0, 0.0, allowance=IDENTITY_TOL * scale),
        equivalence_verdict('prop.1.normal', gap1 <= vanish, normal_gap <= vanish, near1,
                            details={'transform_gap': gap1, 'normality_gap': normal_gap}),
    ]))

    # (2) C(A) - C*(A) = (M - m)(A - A*); vanishes iff A is self-adjoint
    skew = A - adjoint(A)
    D2 = C - C_adj
    residual2 = spectral_norm(D2 - w.constants().diff * skew)
    gap2 = spectral_norm(D2)
    skew_gap = spectral_norm(skew)
    near2 = any(0.01 * vanish <= x <= 100 * vanish for x in (gap2, skew_gap))
    verdicts.append(combine('prop.2', [
        scalar_verdict('prop.2.identity', residual2, 0.0, 0.0, allowance=IDENTITY_TOL * scale),
        equivalence_verdict('prop.2.selfadjoint', gap2 <= vanish, skew_gap <= vanish, near2,
                            details={'transform_gap': gap2, 'skew_gap': skew_gap}),
    ]))

    # (3) C(|A|) accretive iff mI <= |A| <= MI
    re_abs = eig_hermitian(hermitian_part(transform_C(abs_op(A), w))).values
    sigma = singular_values(A)
    left3 = bool(re_abs[0] >= -tol.band(re_abs[0], re_abs[-1]))
    band_margin = min(sigma[0] - w.m, w.M - sigma[-1])
    right3 = bool(band_margin >= -tol.band(w.M))
    near3 = (abs(re_abs[0]) <= _margin_band(re_abs, tol)
             or abs(band_margin) <= 4 * tol.band(w.M))
    verdicts.append(equivalence_verdict('prop.3', left3, right3, near3, details={
        'sigma_min': float(sigma[0]),
        'sigma_max': float(sigma[-1]),
        'lambda_min_re_transform_abs': float(re_abs[0]),
    }))

    # (4) Re C(iA*), Re C(A) <= r^2 I
    ceiling = w.r ** 2 * I
    verdicts.append(combine('prop.4', [
        loewner_leq(hermitian_part(C), ceiling, tol, 'prop.4.direct'),
        loewner_leq(hermitian_part(transform_C(1j * adjoint(A), w)), ceiling, tol, 'prop.4.iastar'),
    ]))

    # (5) Im C(A) = (M - m) Im A, hence Im C >= 0 iff Im A >= 0
    im_C = imaginary_part(C)
    im_A = imaginary_part(A)
    residual5 = spectral_norm(im_C - w.constants().diff * im_A)
    im_C_vals = eig_hermitian(im_C).values
    im_A_vals = eig_hermitian(im_A).values
    left5 = bool(im_C_vals[0] >= -tol.band(im_C_vals[0], im_C_vals[-1]))
    right5 = bool(im_A_vals[0] >= -tol.band(im_A_vals[0], im_A_vals[-1]))
    near5 = (abs(im_C_vals[0]) <= _margin_band(im_C_vals, tol)
             or abs(im_A_vals[0]) <= _margin_band(im_A_vals, tol))
    verdicts.append(combine('prop.5', [
        scalar_verdict('prop.5.identity', residual5, 0.0, 0.0, allowance=IDENTITY_TOL * scale),
        equivalence_verdict('prop.5.sign', left5, right5, near5),
    ]))

    # (6) Re C(A) >= 0 implies Re A >= 0
    C_accretive = is_accretive(C, tol)
    A_accretive = is_accretive(A, tol)
    re_A = hermitian_part(A)
    zero = np.zeros((n, n), dtype=complex)
    if C_accretive:
        verdicts.append(loewner_leq(zero, re_A, tol, 'prop.6'))
    else:
        verdicts.append(not_met('prop.6', RELATION_LOEWNER, 'C_{M,m}(A) is not accretive',
                                details={'converse_counterexample': A_accretive}))

    # (7) C(A) accretive-dissipative implies A accretive-dissipative
    C_dissipative = left5
    if C_accretive and C_dissipative:
        verdicts.append(combine('prop.7', [
            loewner_leq(zero, re_A, tol, 'prop.7.accretive'),
            loewner_leq(zero, im_A, tol, 'prop.7.dissipative'),
        ]))
    else:
        verdicts.append(not_met('prop.7', RELATION_LOEWNER,
                                'C_{M,m}(A) is not accretive-dissipative',
                                details={'converse_counterexample': A_accretive and right5}))
    return verdicts


def find_converse_counterexamples(rng: np.random.Generator, trials: int = 200,
                                  n: int = 3, tol: Tolerance = DEFAULT_TOL) -> List[Dict[str, Any]]:
    """Search for instances where A is accretive-dissipative but C_{M,m}(A) is not accretive.

    Only one direction of the implications is claimed for the transform;
    this collects evidence that the converses are genuinely false.

    Returns:
        List of {'matrix', 'window'} dictionaries (numpy matrix, Window)
    """
    found = []
    for _ in range(trials):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        # accretive-dissipative by construction: PSD real and imaginary parts
        A = G @ adjoint(G) + 1j * (H @ adjoint(H))
        m = float(rng.uniform(0.1, 1.0))
        w = Window(m, m * float(rng.uniform(1.5, 4.0)))
        if is_accretive(A, tol) and is_dissipative(A, tol) and not accretive_via_disk(A, w, tol):
            found.append({'matrix': as_matrix(A), 'window': w})
    return found
