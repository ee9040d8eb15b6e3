"""
Numerical Radius Module

Certified numerical radius by branch-and-bound over the support function
f(theta) = lambda_max(Re(e^{i theta} A)), and sampling of the boundary of the
numerical range W(A).
"""

import heapq
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .errors import InputError
from .linalg_core import (DEFAULT_TOL, EigenStack, Tolerance, as_matrix,
                          eig_hermitian_stack, hermitian_norm, hermitian_part,
                          imaginary_part, spectral_norm)
from .verdict import Verdict, scalar_verdict


DEFAULT_EPS = 1e-8
INITIAL_INTERVALS = 64
SUBDIVISIONS = 8
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Enclosure:
    """Certified interval [lo, hi] containing a scalar."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.hi < self.lo:
            raise InputError(f'Enclosure requires lo <= hi, got [{self.lo}, {self.hi}]')

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack

    def to_dict(self) -> Dict[str, float]:
        return {'lo': self.lo, 'hi': self.hi}


@dataclass(frozen=True)
class RangePoint:
    """A boundary point z = <Ax, x> of W(A) found at angle theta."""

    theta: float
    z: complex


class _SupportFunction:
    """f(theta) = lambda_max(cos(theta) Re A - sin(theta) Im A), evaluated over batches of angles.

    Eigenvectors of every evaluated angle are kept so a batch can start
    Jacobi from the bases of neighbouring angles.
    """

    def __init__(self, A: np.ndarray):
        self.A = A
        self.real = hermitian_part(A)
        self.imag = imaginary_part(A)
        self.evaluations = 0
        self.bases: Dict[float, np.ndarray] = {}

    def rotated(self, thetas: Sequence[float]) -> np.ndarray:
        angles = np.asarray(thetas, dtype=float)[:, None, None]
        return np.cos(angles) * self.real - np.sin(angles) * self.imag

    def decompose(self, thetas: Sequence[float],
                  near: Optional[Sequence[float]] = None) -> EigenStack:
        start = np.stack([self.bases[a] for a in near]) if near is not None else None
        dec = eig_hermitian_stack(self.rotated(thetas), start=start)
        for theta, basis in zip(thetas, dec.vectors):
            self.bases[theta] = basis
        self.evaluations += len(thetas)
        return dec

    def values(self, thetas: Sequence[float], near: Optional[Sequence[float]] = None) -> List[float]:
        return [float(v) for v in self.decompose(thetas, near).values[:, -1]]

    def __call__(self, theta: float) -> float:
        return self.values([theta])[0]


def rotated_real_max(A: Any, theta: float) -> float:
    """lambda_max(Re(e^{i theta} A)); Lipschitz in theta with constant ||A||."""
    return _SupportFunction(as_matrix(A))(float(theta))


def _potential(fa: float, fb: float, half: float, lipschitz: float) -> float:
    """Upper bound of f on an interval of half-width `half` with endpoint values fa, fb.

    Two bounds are combined. The Lipschitz bound uses the slope limit ||A||.
    The wedge bound uses that W(A) lies in the intersection of the two
    supporting half-planes at the endpoints, whose support function is
    maximal at the wedge vertex.
    """
    bound = 0.5 * (fa + fb) + lipschitz * half
    if half < 0.5 * math.pi:
        cos_h = math.cos(half)
        tan_h = math.tan(half)
        alpha = 0.5 * (fa + fb) / cos_h
        beta = (fb - fa) / (2.0 * cos_h * tan_h) if tan_h > 0 else 0.0
        psi = math.atan2(beta, alpha)
        if abs(psi) <= half:
            wedge = math.hypot(alpha, beta)
        else:
            wedge = max(fa, fb)
        bound = min(bound, wedge)
    return max(bound, fa, fb)


def numerical_radius(A: Any, eps: float = DEFAULT_EPS,
                     initial_intervals: int = INITIAL_INTERVALS) -> Enclosure:
    """Certified enclosure of omega(A) = max over theta of lambda_max(Re(e^{i theta} A)).

    Regions are kept in a max-heap keyed by their upper potential, ties broken
    by the lower interval endpoint. Each round pops, in heap order, every
    region whose potential exceeds the best evaluated f by more than
    eps * max(1, ||A||) and cuts each into SUBDIVISIONS equal parts. All new
    angles go through one batched Jacobi run, each started from the basis of
    the nearer endpoint of its region.

    Args:
        A: Square matrix
        eps: Relative width target
        initial_intervals: Size of the uniform starting grid over [0, 2 pi)

    Returns:
        Enclosure with lo the best evaluated f and hi the largest open potential

    Raises:
        InputError: If eps is not positive
    """
    if not eps > 0:
        raise InputError(f'eps must be positive, got {eps}')
    if initial_intervals < 2:
        raise InputError(f'initial_intervals must be at least 2, got {initial_intervals}')
    A = as_matrix(A)
    f = _SupportFunction(A)
    lipschitz = spectral_norm(A)
    target = eps * max(1.0, lipschitz)

    step = TWO_PI / initial_intervals
    grid = [k * step for k in range(initial_intervals)]
    values = f.values(grid)
    values.append(values[0])
    grid.append(TWO_PI)
    lo = max(values)

    heap = []
    for k in range(initial_intervals):
        pot = _potential(values[k], values[k + 1], 0.5 * step, lipschitz)
        if pot > lo:
            heapq.heappush(heap, (-pot, grid[k], grid[k + 1], values[k], values[k + 1]))
    f.bases[TWO_PI] = f.bases[0.0]

    while heap and -heap[0][0] - lo > target:
        split = []
        while heap and -heap[0][0] - lo > target:
            split.append(heapq.heappop(heap))
        points, near = [], []
        for _, a, b, _, _ in split:
            width = (b - a) / SUBDIVISIONS
            for j in range(1, SUBDIVISIONS):
                points.append(a + j * width)
                near.append(a if 2 * j <= SUBDIVISIONS else b)
        point_values = f.values(points, near=near)
        lo = max(lo, max(point_values))
        inner = SUBDIVISIONS - 1
        for k, (_, a, b, fa, fb) in enumerate(split):
            xs = [a] + points[k * inner:(k + 1) * inner] + [b]
            fs = [fa] + point_values[k * inner:(k + 1) * inner] + [fb]
            half = 0.5 * (b - a) / SUBDIVISIONS
            for j in range(SUBDIVISIONS):
                pot = _potential(fs[j], fs[j + 1], half, lipschitz)
                if pot > lo:
                    heapq.heappush(heap, (-pot, xs[j], xs[j + 1], fs[j], fs[j + 1]))

    hi = max(lo, -heap[0][0]) if heap else lo
    return Enclosure(lo=lo, hi=hi)


def range_samples(A: Any, count: int) -> List[RangePoint]:
    """Boundary points of W(A) on a uniform angle grid.

    For each theta the top eigenvector x of Re(e^{i theta} A) gives the
    supporting point z = <Ax, x>.
    """
    if count < 3:
        raise InputError(f'count must be at least 3, got {count}')
    A = as_matrix(A)
    thetas = [TWO_PI * k / count for k in range(count)]
    tops = _SupportFunction(A).decompose(thetas).vectors[:, :, -1]
    points = []
    for theta, x in zip(thetas, tops):
        x = x / np.linalg.norm(x)
        z = complex(np.vdot(x, A @ x))
        points.append(RangePoint(theta=theta, z=z))
    return points


def basic_bounds(A: Any, tol: Tolerance = DEFAULT_TOL, eps: float = DEFAULT_EPS) -> List[Verdict]:
    """The four unconditional bounds ||A||/2 <= w, w <= ||A||, ||Re A|| <= w, ||Im A|| <= w.

    The enclosure is consumed conservatively: lo where omega is the larger
    side, hi where it is the smaller side, with the enclosure width granted
    as allowance.
    """
    A = as_matrix(A)
    omega = numerical_radius(A, eps)
    norm = spectral_norm(A)
    re_norm = hermitian_norm(hermitian_part(A))
    im_norm = hermitian_norm(imaginary_part(A))
    details = {'omega': omega.to_dict(), 'norm': norm}
    return [
        scalar_verdict('w.basic_bounds.half_norm', 0.5 * norm, omega.lo, tol.rel,
                       allowance=omega.width, details=details),
        scalar_verdict('w.basic_bounds.norm', omega.hi, norm, tol.rel,
                       allowance=omega.width, details=details),
        scalar_verdict('w.basic_bounds.real', re_norm, omega.lo, tol.rel,
                       allowance=omega.width, details=details),
        scalar_verdict('w.basic_bounds.imag', im_norm, omega.lo, tol.rel,
                       allowance=omega.width, details=details),
    ]
