import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies

from modules.errors import DegenerateWindowError, InputError
from modules.generators import gen_disk
from modules.linalg_core import as_matrix
from modules.transform import Window
from modules.window_solver import (OBJECTIVE_WIDTH, Variant, biaccretive_feasible,
                                   center_distance, feasible_window, golden_section,
                                   map_variant, optimal_window, pull_back)
from tests.strategies import complex_matrices, disk_specs


def test_variant_parse():
    assert Variant.parse('IASTAR') is Variant.IASTAR
    assert Variant.parse('absA') is Variant.ABSA
    assert Variant.ABSIASTAR.is_singular_band
    assert not Variant.AINV.is_singular_band
    with pytest.raises(InputError):
        Variant.parse('transpose')


@pytest.mark.parametrize('variant', [Variant.A, Variant.IASTAR, Variant.IA, Variant.AINV])
def test_pull_back_inverts_map_variant(rng, variant):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) + 3 * np.eye(3)
    assert np.allclose(pull_back(map_variant(A, variant), variant), A)


def test_golden_section_finds_minimum():
    x, fx = golden_section(lambda t: (t - 2.0) ** 2 + 1.0, 0.0, 5.0, 1e-10)
    assert x == pytest.approx(2.0, abs=1e-6)
    assert fx == pytest.approx(1.0)


def test_optimal_window_diagonal():
    result = optimal_window(np.diag([1.0, 4.0]))
    assert result.feasible
    assert result.mu_star == pytest.approx(2.5, abs=1e-6)
    assert result.window.m == pytest.approx(1.0, abs=1e-6)
    assert result.window.M == pytest.approx(4.0, abs=1e-6)
    assert result.K == pytest.approx(1.25, abs=1e-6)
    assert result.to_dict()['variant'] == 'A'


def test_width_objective_is_no_wider():
    A = np.array([[2.0, 1.0], [0.0, 3.0 + 0.5j]])
    kantorovich = optimal_window(A)
    width = optimal_window(A, objective=OBJECTIVE_WIDTH)
    assert width.feasible
    assert width.window.M - width.window.m <= kantorovich.window.M - kantorovich.window.m + 1e-6


def test_pad_moves_off_the_boundary():
    A = np.diag([1.0, 4.0])
    padded = optimal_window(A, pad=0.1)
    assert padded.feasible
    assert padded.window.r == pytest.approx(1.65, abs=1e-6)
    assert padded.K > 1.25


def test_scalar_operator_is_degenerate():
    with pytest.raises(DegenerateWindowError):
        optimal_window(2.0 * np.eye(3))


def test_nilpotent_is_infeasible():
    result = optimal_window([[0.0, 1.0], [0.0, 0.0]])
    assert not result.feasible
    assert result.window is None
    assert math.isinf(result.K)
    assert result.to_dict()['K'] is None


def test_optimal_window_rejects_bad_arguments():
    with pytest.raises(InputError):
        optimal_window(np.eye(2), pad=-1.0)
    with pytest.raises(InputError):
        optimal_window(np.eye(2), objective='area')


@given(strategies.data())
def test_center_distance_is_convex(data):
    A = data.draw(complex_matrices())
    a = data.draw(strategies.floats(min_value=-5.0, max_value=5.0))
    b = data.draw(strategies.floats(min_value=-5.0, max_value=5.0))
    mid = center_distance(A, 0.5 * (a + b))
    assert mid <= 0.5 * (center_distance(A, a) + center_distance(A, b)) + 1e-9 * (1 + np.linalg.norm(A))


@given(strategies.data())
def test_optimal_window_beats_generator_window(data):
    spec = data.draw(disk_specs())
    A, w = gen_disk(spec)
    result = optimal_window(A)
    assert result.feasible
    assert result.K <= w.K + 1e-6
    assert feasible_window(A, Variant.A, result.window)


def test_singular_band_feasibility():
    A = as_matrix(np.diag([1.0, 3.0]) @ np.array([[0, 1], [1, 0]]))
    assert feasible_window(A, Variant.ABSA, Window(1.0, 3.0))
    assert not feasible_window(A, Variant.ABSA, Window(1.5, 3.0))


def test_biaccretive_feasible_reports_both_disks():
    w = Window(0.2, 1.8)
    A = 0.5 * (1 + 1j) * np.eye(2)
    check = biaccretive_feasible(A, w)
    assert bool(check)
    assert check.distance_direct == pytest.approx(math.sqrt(0.5))
    assert check.distance_partner == pytest.approx(math.sqrt(0.5))

    one_sided = biaccretive_feasible(np.eye(2), Window(0.5, 2.0))
    assert one_sided.direct and not one_sided.partner
    assert not one_sided
    with pytest.raises(InputError):
        biaccretive_feasible(np.eye(2), w, partner=Variant.AINV)


@given(strategies.lists(strategies.floats(min_value=0.1, max_value=10.0), min_size=2, max_size=6))
def test_optimal_window_of_positive_diagonal(values):
    lo, hi = min(values), max(values)
    assume(hi >= 1.01 * lo)
    result = optimal_window(np.diag(values))
    assert result.feasible
    assert result.K == pytest.approx((hi + lo) / (2 * math.sqrt(hi * lo)), rel=1e-8)
