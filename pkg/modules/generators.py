"""
Generators Module

Hypothesis-aware random instances. Disk, bi-disk and singular-band
generators build operators that satisfy their target hypothesis by
construction; recipes turn a (case id, trial seed, dimension) triple into a
catalog Instance.
"""

import hashlib
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from .catalog import FORM_MINUS, FORM_PLUS, Instance, PositiveMapSpec, get_case
from .errors import GeneratorError
from .linalg_core import (adjoint, as_matrix, eig_hermitian, identity,
                          inverse_sqrt_pd, spectral_norm, sqrt_psd)
from .transform import Window
from .window_solver import Variant, pull_back


DEFAULT_FILL = 0.9
MAX_SEED = 2 ** 64

RNG_NAME = 'numpy.PCG64'
HASH_SCHEME = 'blake2b-8(master_seed:case_id:index), little endian'
DISTRIBUTION = 'complex Gaussian fill; m ~ U[0.5, 2], M = m * U[1.2, 8]'

KIND_DISK = 'disk'
KIND_BIDISK = 'bidisk'
KIND_BAND = 'singular_band'
KIND_JORDAN = 'jordan_like'
KIND_UNRESTRICTED = 'unrestricted'
KINDS = (KIND_DISK, KIND_BIDISK, KIND_BAND, KIND_JORDAN, KIND_UNRESTRICTED)


def stable_hash(master_seed: int, case_id: str, index: int) -> int:
    """64-bit trial seed, independent of every other case's stream."""
    digest = hashlib.blake2b(f'{master_seed}:{case_id}:{index}'.encode('utf-8'), digest_size=8)
    return int.from_bytes(digest.digest(), 'little')


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class GeneratorSpec:
    """What to draw: kind, dimension, seed and the kind's parameters."""

    kind: str
    dim: int
    seed: int
    mu: Optional[float] = None
    r: Optional[float] = None
    m: Optional[float] = None
    M: Optional[float] = None
    fill: float = DEFAULT_FILL
    partner: Variant = Variant.IASTAR
    dissipative: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeneratorError(f'Unknown generator kind {self.kind!r}')
        if self.dim < 1:
            raise GeneratorError(f'dim must be positive, got {self.dim}')
        if not 0 <= self.seed < MAX_SEED:
            raise GeneratorError(f'seed must be a 64-bit unsigned integer, got {self.seed}')
        if not 0 < self.fill <= 1:
            raise GeneratorError(f'fill must lie in (0, 1], got {self.fill}')

    def rng(self) -> np.random.Generator:
        return make_rng(self.seed)


def complex_gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    """n x n matrix of independent standard complex Gaussians."""
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Eigenvector matrix of a random Hermitian draw."""
    G = complex_gaussian(rng, n)
    return eig_hermitian((G + adjoint(G)) / 2).vectors


def random_window(rng: np.random.Generator) -> Window:
    m = rng.uniform(0.5, 2.0)
    return Window(m, m * rng.uniform(1.2, 8.0))


def _direction(rng: np.random.Generator, n: int, dissipative: bool) -> np.ndarray:
    """Perturbation direction; with dissipative=True its imaginary part is PSD."""
    B = complex_gaussian(rng, n)
    if dissipative:
        G = complex_gaussian(rng, n)
        B = (B + adjoint(B)) / 2 + 1j * (G @ adjoint(G))
    if spectral_norm(B) == 0:
        return np.eye(n, dtype=complex)
    return B


def disk_matrix(rng: np.random.Generator, n: int, mu: float, r: float,
                fill: float = DEFAULT_FILL, dissipative: bool = False) -> np.ndarray:
    """A = mu I + (fill r / ||B||) B, so ||A - mu I|| = fill r."""
    if not mu > r > 0:
        raise GeneratorError(f'Disk requires mu > r > 0, got mu={mu}, r={r}')
    B = _direction(rng, n, dissipative)
    return as_matrix(mu * identity(n) + (fill * r / spectral_norm(B)) * B)


def bidisk_matrix(rng: np.random.Generator, n: int, mu: float, r: float,
                  fill: float = DEFAULT_FILL, partner: Variant = Variant.IASTAR) -> np.ndarray:
    """A near mu(1 + i)/2 (iAstar) or mu(1 - i)/2 (iA), inside both disks of radius r.

    The construction point lies at distance mu/sqrt(2) from both centres,
    so the perturbation budget is r - mu/sqrt(2).
    """
    threshold = mu / math.sqrt(2)
    if r < threshold:
        raise GeneratorError(f'Bi-disk requires r >= mu/sqrt(2) = {threshold:.6g}, got r={r}')
    if partner not in (Variant.IASTAR, Variant.IA):
        raise GeneratorError(f'Bi-disk partner must be iAstar or iA, got {partner}')
    sign = 1.0 if partner is Variant.IASTAR else -1.0
    center = mu * (1 + sign * 1j) / 2
    B = _direction(rng, n, False)
    s = fill * (r - threshold) / spectral_norm(B)
    return as_matrix(center * identity(n) + s * B)


def band_matrix(rng: np.random.Generator, n: int, m: float, M: float) -> np.ndarray:
    """A = U diag(sigma) V* with sigma uniform in [m, M]."""
    if not 0 < m < M:
        raise GeneratorError(f'Singular band requires 0 < m < M, got ({m}, {M})')
    U = random_unitary(rng, n)
    V = random_unitary(rng, n)
    sigma = rng.uniform(m, M, n)
    return as_matrix((U * sigma) @ adjoint(V))


def jordan_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """lambda I plus a random nilpotent superdiagonal."""
    lam = complex(rng.standard_normal(), rng.standard_normal())
    A = lam * np.eye(n, dtype=complex)
    if n > 1:
        upper = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)
        A += np.diag(upper, k=1)
    return as_matrix(A)


def unrestricted_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    return as_matrix(complex_gaussian(rng, n))


def gen_disk(spec: GeneratorSpec) -> Tuple[np.ndarray, Window]:
    """Draw A with C_{M,m}(A) accretive for the window (mu - r, mu + r).

    Raises:
        GeneratorError: If the spec is not a disk spec or r is degenerate
    """
    if spec.kind != KIND_DISK or spec.mu is None or spec.r is None:
        raise GeneratorError('gen_disk needs a disk spec with mu and r')
    A = disk_matrix(spec.rng(), spec.dim, spec.mu, spec.r, spec.fill, spec.dissipative)
    return A, Window.from_center(spec.mu, spec.r)


def gen_bidisk(spec: GeneratorSpec) -> Tuple[np.ndarray, Window]:
    """Draw A with C_{M,m}(A) and C_{M,m}(partner(A)) accretive.

    Every bi-disk window has M/m >= 3 + 2 sqrt(2), since r >= mu/sqrt(2).
    """
    if spec.kind != KIND_BIDISK or spec.mu is None or spec.r is None:
        raise GeneratorError('gen_bidisk needs a bidisk spec with mu and r')
    A = bidisk_matrix(spec.rng(), spec.dim, spec.mu, spec.r, spec.fill, spec.partner)
    return A, Window.from_center(spec.mu, spec.r)


def gen_singular_band(spec: GeneratorSpec) -> Tuple[np.ndarray, Window]:
    """Draw A with singular values in [m, M]."""
    if spec.kind != KIND_BAND or spec.m is None or spec.M is None:
        raise GeneratorError('gen_singular_band needs a singular_band spec with m and M')
    A = band_matrix(spec.rng(), spec.dim, spec.m, spec.M)
    return A, Window(spec.m, spec.M)


def generate(spec: GeneratorSpec) -> np.ndarray:
    """Matrix for any generator kind."""
    if spec.kind == KIND_DISK:
        return gen_disk(spec)[0]
    if spec.kind == KIND_BIDISK:
        return gen_bidisk(spec)[0]
    if spec.kind == KIND_BAND:
        return gen_singular_band(spec)[0]
    if spec.kind == KIND_JORDAN:
        return jordan_matrix(spec.rng(), spec.dim)
    return unrestricted_matrix(spec.rng(), spec.dim)


def random_positive_map(rng: np.random.Generator, n: int) -> PositiveMapSpec:
    choice = int(rng.integers(0, 3))
    if choice == 0:
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return PositiveMapSpec.vector_state(x / np.linalg.norm(x))
    if choice == 1:
        k = int(rng.integers(1, n + 1))
        return PositiveMapSpec.compression(random_unitary(rng, n)[:, :k])
    return PositiveMapSpec.normalized_trace()


# -- Recipes: (rng, n, fill) -> Instance fields --------------------------------

Recipe = Callable[[np.random.Generator, int, float], Dict[str, Any]]


def _disk(rng: np.random.Generator, n: int, fill: float, dissipative: bool = False):
    w = random_window(rng)
    return disk_matrix(rng, n, w.mu, w.r, fill, dissipative), w


def _band(rng: np.random.Generator, n: int):
    w = random_window(rng)
    return band_matrix(rng, n, w.m, w.M), w


def _bidisk(rng: np.random.Generator, n: int, fill: float, partner: Variant):
    mu = rng.uniform(0.5, 2.0)
    r = mu / math.sqrt(2) * rng.uniform(1.05, 1.35)
    w = Window.from_center(mu, r)
    notes = {'window_ratio': w.M / w.m, 'ratio_at_least_silver': w.M / w.m >= 3 + 2 * math.sqrt(2)}
    return bidisk_matrix(rng, n, mu, r, fill, partner), w, notes


def _recipe_disk_variant(variant: Variant) -> Recipe:
    def recipe(rng, n, fill):
        X, w = _disk(rng, n, fill)
        return {'A': pull_back(X, variant), 'window': w}
    return recipe


def _recipe_band_variant(variant: Variant) -> Recipe:
    def recipe(rng, n, fill):
        X, w = _band(rng, n)
        return {'A': pull_back(X, variant), 'window': w}
    return recipe


def _recipe_unrestricted_window(rng, n, fill):
    return {'A': unrestricted_matrix(rng, n), 'window': random_window(rng)}


def _recipe_unrestricted(rng, n, fill):
    A = jordan_matrix(rng, n) if rng.random() < 0.25 else unrestricted_matrix(rng, n)
    return {'A': A, 'phi': random_positive_map(rng, n)}


def _recipe_disk_dissipative(rng, n, fill):
    A, w = _disk(rng, n, fill, dissipative=True)
    return {'A': A, 'window': w}


def _recipe_band(rng, n, fill):
    A, w = _band(rng, n)
    return {'A': A, 'window': w, 'phi': random_positive_map(rng, n)}


def _recipe_bidisk_iastar(rng, n, fill):
    A, w, notes = _bidisk(rng, n, fill, Variant.IASTAR)
    return {'A': A, 'window': w, 't': float(rng.uniform(0.0, 1.0)), 'notes': notes}


def _recipe_bidisk_ia_pair(rng, n, fill):
    A, w, notes = _bidisk(rng, n, fill, Variant.IA)
    return {'A': A, 'window': w, 'B': unrestricted_matrix(rng, n), 'notes': notes}


def _recipe_commutator_minus(rng, n, fill):
    A, w = _disk(rng, n, fill)
    return {'A': A, 'window': w, 'B': unrestricted_matrix(rng, n), 'form': FORM_MINUS}


def _recipe_commutator_plus(rng, n, fill):
    X, w = _disk(rng, n, fill)
    return {'A': pull_back(X, Variant.IA), 'window': w, 'B': unrestricted_matrix(rng, n),
            'form': FORM_PLUS}


def _recipe_disk_product(rng, n, fill):
    A, w = _disk(rng, n, fill)
    B, w_b = _disk(rng, n, fill)
    return {'A': A, 'window': w, 'B': B, 'window_b': w_b}


def _recipe_block(rng, n, fill):
    w = random_window(rng)
    S = w.mu * identity(n) + 0.01 * w.r * complex_gaussian(rng, n)
    T = w.mu * identity(n) + 0.01 * w.r * complex_gaussian(rng, n)
    return {'A': as_matrix(S), 'B': as_matrix(T), 'window': w}


def _recipe_sqrt_equiv(rng, n, fill):
    G = complex_gaussian(rng, n)
    H = complex_gaussian(rng, n)
    X = as_matrix(G @ adjoint(G))
    Y = as_matrix(H @ adjoint(H) + 0.1 * np.eye(n))
    critical = spectral_norm(sqrt_psd(X) @ inverse_sqrt_pd(Y)) ** 2
    return {'A': X, 'B': Y, 'alpha': float(max(critical, 1e-6) * rng.uniform(0.5, 1.5))}


def _recipe_psd_pair(rng, n, fill):
    G = complex_gaussian(rng, n)
    H = complex_gaussian(rng, n)
    return {'A': as_matrix(G @ adjoint(G)), 'B': as_matrix(H @ adjoint(H))}


RECIPES: Dict[str, Recipe] = {
    'unrestricted_window': _recipe_unrestricted_window,
    'unrestricted': _recipe_unrestricted,
    'disk': _recipe_disk_variant(Variant.A),
    'disk_dissipative': _recipe_disk_dissipative,
    'disk_iastar': _recipe_disk_variant(Variant.IASTAR),
    'disk_ainv': _recipe_disk_variant(Variant.AINV),
    'band': _recipe_band,
    'band_iastar': _recipe_band_variant(Variant.IASTAR),
    'band_ainv': _recipe_band_variant(Variant.AINV),
    'bidisk_iastar': _recipe_bidisk_iastar,
    'bidisk_ia_pair': _recipe_bidisk_ia_pair,
    'commutator_minus': _recipe_commutator_minus,
    'commutator_plus': _recipe_commutator_plus,
    'disk_product': _recipe_disk_product,
    'block': _recipe_block,
    'sqrt_equiv': _recipe_sqrt_equiv,
    'psd_pair': _recipe_psd_pair,
}


def build_instance(case_id: str, seed: int, n: int, fill: float = DEFAULT_FILL) -> Instance:
    """Draw an instance satisfying the case's hypothesis.

    Raises:
        UnknownCaseError: If the case id is not registered
        GeneratorError: If the case's recipe is missing or fill is out of range
    """
    if not 0 < fill <= 1:
        raise GeneratorError(f'fill must lie in (0, 1], got {fill}')
    case = get_case(case_id)
    recipe = RECIPES.get(case.recipe)
    if recipe is None:
        raise GeneratorError(f'No generator recipe {case.recipe!r} for case {case_id}')
    fields = recipe(make_rng(seed), n, fill)
    return Instance(case_id=case_id, seed=seed, **fields)
