import math

import numpy as np
import pytest
from hypothesis import given, strategies

from modules.errors import GeneratorError, UnknownCaseError
from modules.generators import (KIND_BAND, KIND_BIDISK, KIND_DISK, KIND_JORDAN, MAX_SEED, RECIPES,
                                GeneratorSpec, build_instance, gen_bidisk, gen_disk,
                                gen_singular_band, generate, random_positive_map, stable_hash)
from modules.catalog import REGISTRY
from modules.linalg_core import identity, singular_values, spectral_norm
from modules.transform import accretive_via_disk
from modules.window_solver import Variant, biaccretive_feasible
from tests.strategies import disk_specs, seeds


def test_stable_hash_is_stable_and_case_specific():
    a = stable_hash(0, 'thm.abs_real.a', 0)
    assert a == stable_hash(0, 'thm.abs_real.a', 0)
    assert a != stable_hash(0, 'thm.abs_real.iastar', 0)
    assert a != stable_hash(1, 'thm.abs_real.a', 0)
    assert a != stable_hash(0, 'thm.abs_real.a', 1)
    assert 0 <= a < MAX_SEED


@given(strategies.data())
def test_disk_generator_meets_hypothesis(data):
    spec = data.draw(disk_specs())
    A, w = gen_disk(spec)
    assert A.shape == (spec.dim, spec.dim)
    assert accretive_via_disk(A, w)
    distance = spectral_norm(A - w.mu * identity(spec.dim))
    assert distance == pytest.approx(spec.fill * spec.r, rel=1e-9)


def test_same_seed_same_matrix():
    spec = GeneratorSpec(kind=KIND_DISK, dim=4, seed=99, mu=3.0, r=2.0)
    assert np.array_equal(gen_disk(spec)[0], gen_disk(spec)[0])
    other = GeneratorSpec(kind=KIND_DISK, dim=4, seed=100, mu=3.0, r=2.0)
    assert not np.array_equal(gen_disk(spec)[0], gen_disk(other)[0])


@pytest.mark.parametrize('partner', [Variant.IASTAR, Variant.IA])
def test_bidisk_generator(partner):
    mu = 1.0
    r = 0.8
    spec = GeneratorSpec(kind=KIND_BIDISK, dim=3, seed=5, mu=mu, r=r, partner=partner)
    A, w = gen_bidisk(spec)
    check = biaccretive_feasible(A, w, partner=partner)
    assert check.direct and check.partner
    assert w.M / w.m >= 3 + 2 * math.sqrt(2)


def test_bidisk_generator_rejects_small_radius():
    spec = GeneratorSpec(kind=KIND_BIDISK, dim=2, seed=1, mu=1.0, r=0.5)
    with pytest.raises(GeneratorError):
        gen_bidisk(spec)


@given(seeds)
def test_singular_band_generator(seed):
    spec = GeneratorSpec(kind=KIND_BAND, dim=3, seed=seed, m=0.5, M=2.0)
    A, w = gen_singular_band(spec)
    sigma = singular_values(A)
    assert sigma[0] >= w.m - 1e-9
    assert sigma[-1] <= w.M + 1e-9


def test_jordan_generator_is_upper_triangular():
    A = generate(GeneratorSpec(kind=KIND_JORDAN, dim=4, seed=3))
    assert np.allclose(np.tril(A, -1), 0)
    assert np.allclose(np.diag(A), A[0, 0])
    assert np.allclose(np.triu(A, 2), 0)


def test_generator_spec_validation():
    with pytest.raises(GeneratorError):
        GeneratorSpec(kind='cube', dim=2, seed=0)
    with pytest.raises(GeneratorError):
        GeneratorSpec(kind=KIND_DISK, dim=2, seed=-1)
    with pytest.raises(GeneratorError):
        GeneratorSpec(kind=KIND_DISK, dim=2, seed=0, fill=1.5)
    with pytest.raises(GeneratorError):
        gen_disk(GeneratorSpec(kind=KIND_DISK, dim=2, seed=0))
    with pytest.raises(GeneratorError):
        gen_disk(GeneratorSpec(kind=KIND_DISK, dim=2, seed=0, mu=1.0, r=2.0))


def test_random_positive_maps_are_valid(rng):
    for _ in range(20):
        phi = random_positive_map(rng, 3)
        phi.validate(3)


def test_every_case_has_a_recipe():
    assert {case.recipe for case in REGISTRY.values()} <= set(RECIPES)


def test_build_instance():
    instance = build_instance('w.product', seed=8, n=3)
    assert instance.seed == 8
    assert instance.B.shape == (3, 3)
    assert instance.window_b is not None
    assert build_instance('thm.convex_combo', seed=8, n=2).notes['ratio_at_least_silver']
    with pytest.raises(UnknownCaseError):
        build_instance('nope', seed=0, n=2)
    with pytest.raises(GeneratorError):
        build_instance('w.product', seed=0, n=2, fill=0.0)
