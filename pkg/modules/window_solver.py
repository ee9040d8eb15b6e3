"""
Window Solver Module

Feasibility and optimization of (m, M) windows: decides whether C_{M,m}
applied to an operator (or one of its variants) is accretive, and finds the
window minimizing the Kantorovich ratio K.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from .errors import DegenerateWindowError, InputError
from .linalg_core import (DEFAULT_TOL, Tolerance, abs_op, adjoint, as_matrix,
                          identity, inverse, singular_values, spectral_norm)
from .transform import Window, accretive_via_disk


INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

GOLDEN_MAX_ITER = 200
DEGENERATE_WIDTH = 1e-9

OBJECTIVE_KANTOROVICH = 'kantorovich'
OBJECTIVE_WIDTH = 'width'


class Variant(str, Enum):
    """Which operator the transform hypothesis is applied to."""

    A = 'A'
    IASTAR = 'iAstar'
    IA = 'iA'
    AINV = 'Ainv'
    ABSA = 'absA'
    ABSIASTAR = 'absIAstar'

    @classmethod
    def parse(cls, tag: str) -> 'Variant':
        lookup = {v.value.lower(): v for v in cls}
        try:
            return lookup[str(tag).lower()]
        except KeyError:
            raise InputError(f'Unknown variant {tag!r}; expected one of '
                             f'{", ".join(v.value for v in cls)}') from None

    @property
    def is_singular_band(self) -> bool:
        return self in (Variant.ABSA, Variant.ABSIASTAR)


def map_variant(A: Any, variant: Variant) -> np.ndarray:
    """The operator X whose transform the variant's hypothesis is about.

    Raises:
        SingularMatrixError: For Ainv when A is singular or ill-conditioned
    """
    A = as_matrix(A)
    if variant is Variant.A:
        return A
    if variant is Variant.IASTAR:
        return as_matrix(1j * adjoint(A))
    if variant is Variant.IA:
        return as_matrix(1j * A)
    if variant is Variant.AINV:
        return inverse(A)
    if variant is Variant.ABSA:
        return abs_op(A)
    return abs_op(1j * adjoint(A))


def pull_back(X: Any, variant: Variant) -> np.ndarray:
    """Inverse of map_variant for the disk variants: the A with map_variant(A) = X."""
    X = as_matrix(X)
    if variant is Variant.A or variant.is_singular_band:
        return X
    if variant is Variant.IASTAR:
        return as_matrix(1j * adjoint(X))
    if variant is Variant.IA:
        return as_matrix(-1j * X)
    return inverse(X)


def center_distance(A: Any, mu: float) -> float:
    """g(mu) = ||A - mu I||, convex in mu."""
    A = as_matrix(A)
    return spectral_norm(A - mu * identity(A.shape[0]))


def feasible_window(A: Any, variant: Variant, w: Window, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the variant's transform hypothesis holds for window w.

    Disk variants use the spectral-norm disk criterion on the mapped
    operator; the |A| variants use m <= sigma_min <= sigma_max <= M.
    """
    if variant.is_singular_band:
        sigma = singular_values(A)
        band = tol.band(w.M)
        return bool(sigma[0] >= w.m - band and sigma[-1] <= w.M + band)
    return accretive_via_disk(map_variant(A, variant), w, tol)


@dataclass(frozen=True)
class BiaccretiveCheck:
    """Both disk conditions of a two-sided hypothesis, reported separately."""

    direct: bool
    partner: bool
    distance_direct: float
    distance_partner: float
    partner_variant: str

    def __bool__(self) -> bool:
        return self.direct and self.partner

    def to_dict(self) -> Dict[str, Any]:
        return {
            'direct': self.direct,
            'partner': self.partner,
            'distance_direct': self.distance_direct,
            'distance_partner': self.distance_partner,
            'partner_variant': self.partner_variant,
        }


def biaccretive_feasible(A: Any, w: Window, tol: Tolerance = DEFAULT_TOL,
                         partner: Variant = Variant.IASTAR) -> BiaccretiveCheck:
    """C_{M,m}(A) and C_{M,m}(partner(A)) both accretive.

    ||iA* - mu I|| = ||A - i mu I|| and ||iA - mu I|| = ||A + i mu I||, so the
    partner condition is a second disk centred at i mu (iAstar) or -i mu (iA).
    """
    if partner not in (Variant.IASTAR, Variant.IA):
        raise InputError(f'Partner must be iAstar or iA, got {partner}')
    A = as_matrix(A)
    n = A.shape[0]
    center = 1j * w.mu if partner is Variant.IASTAR else -1j * w.mu
    band = tol.band(w.r)
    d_direct = spectral_norm(A - w.mu * identity(n))
    d_partner = spectral_norm(A - center * identity(n))
    return BiaccretiveCheck(
        direct=bool(d_direct <= w.r + band),
        partner=bool(d_partner <= w.r + band),
        distance_direct=d_direct,
        distance_partner=d_partner,
        partner_variant=partner.value,
    )


def golden_section(f: Callable[[float], float], a: float, b: float, width: float,
                   max_iter: int = GOLDEN_MAX_ITER) -> Tuple[float, float]:
    """Golden-section search for the minimum of a unimodal function on [a, b].

    Returns:
        (x, f(x)) for the best point evaluated
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    best = (c, yc) if yc <= yd else (d, yd)

    for _ in range(max_iter):
        if h <= width:
            break
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
            if yc < best[1]:
                best = (c, yc)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
            if yd < best[1]:
                best = (d, yd)
    return best


def _bisect_root(h: Callable[[float], float], inside: float, outside: float,
                 width: float, max_iter: int = GOLDEN_MAX_ITER) -> float:
    """Boundary of {h > 0} between a feasible and an infeasible point."""
    for _ in range(max_iter):
        if abs(inside - outside) <= width:
            break
        mid = 0.5 * (inside + outside)
        if h(mid) > 0:
            inside = mid
        else:
            outside = mid
    return inside


@dataclass(frozen=True)
class WindowSearchResult:
    """Outcome of optimal_window."""

    window: Optional[Window]
    K: float
    mu_star: float
    g_star: float
    feasible: bool
    variant: str = Variant.A.value
    objective: str = OBJECTIVE_KANTOROVICH
    pad: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'window': self.window.to_dict() if self.window else None,
            'K': self.K if math.isfinite(self.K) else None,
            'mu_star': self.mu_star,
            'g_star': self.g_star,
            'feasible': self.feasible,
            'variant': self.variant,
            'objective': self.objective,
            'pad': self.pad,
        }


def optimal_window(A: Any, variant: Variant = Variant.A, pad: float = 0.0,
                   objective: str = OBJECTIVE_KANTOROVICH,
                   tol: Tolerance = DEFAULT_TOL) -> WindowSearchResult:
    """Find the window (m, M) that makes the variant's transform accretive.

    The Kantorovich objective minimizes K(mu) = mu / sqrt(mu^2 - g(mu)^2),
    i.e. the ratio q(mu) = g(mu)/mu, which is quasiconvex on mu > 0 because
    g is convex; golden-section search applies on the whole bracket. The
    width objective minimizes M - m = 2 g(mu) over the feasible interval.

    Args:
        A: Operator
        variant: Hypothesis variant
        pad: Relative enlargement of r beyond g(mu*) (moves off the boundary)
        objective: 'kantorovich' or 'width'
        tol: Tolerance for the post-construction feasibility check

    Returns:
        WindowSearchResult; feasible=False when no mu > 0 has mu > g(mu)

    Raises:
        DegenerateWindowError: If the optimal window has M - m below 1e-9 * max(1, mu*)
        InputError: On negative pad or unknown objective
    """
    if pad < 0:
        raise InputError(f'pad must be non-negative, got {pad}')
    if objective not in (OBJECTIVE_KANTOROVICH, OBJECTIVE_WIDTH):
        raise InputError(f'Unknown objective {objective!r}')

    X = map_variant(A, variant)
    norm = spectral_norm(X)
    lower = tol.rel
    upper = 2.0 * norm + 1.0
    width = 1e-12 * max(1.0, norm)

    def g(mu: float) -> float:
        return center_distance(X, mu)

    def ratio(mu: float) -> float:
        return g(mu) / mu

    mu_star, q_star = golden_section(ratio, lower, upper, width)
    if not q_star < 1.0:
        return WindowSearchResult(window=None, K=math.inf, mu_star=mu_star,
                                  g_star=g(mu_star), feasible=False,
                                  variant=variant.value, objective=objective, pad=pad)

    if objective == OBJECTIVE_WIDTH:
        def margin(mu: float) -> float:
            return mu - g(mu)

        left = _bisect_root(margin, mu_star, lower, width)
        right = upper if margin(upper) > 0 else _bisect_root(margin, mu_star, upper, width)
        mu_star, _ = golden_section(g, left, right, width)

    g_star = g(mu_star)
    r = g_star * (1.0 + pad)
    if r >= mu_star:
        r = 0.5 * (g_star + mu_star)
    if 2.0 * r < DEGENERATE_WIDTH * max(1.0, mu_star):
        raise DegenerateWindowError(
            f'Optimal window is degenerate: operator is {mu_star:.6g} I up to {g_star:.3e}')

    window = Window.from_center(mu_star, r)
    verified = feasible_window(A, variant, window, tol)
    return WindowSearchResult(window=window, K=window.K, mu_star=mu_star, g_star=g_star,
                              feasible=verified, variant=variant.value,
                              objective=objective, pad=pad)
