import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies

from modules.errors import InputError, InvalidWindowError
from modules.generators import GeneratorSpec, KIND_DISK, gen_disk
from modules.linalg_core import hermitian_part, identity, is_psd, spectral_norm
from modules.transform import (Window, accretive_via_disk, find_converse_counterexamples,
                               identity_residual, identity_scale, is_accretive, is_dissipative,
                               prop_checks, transform_C)
from modules.verdict import STATUS_NOT_MET
from tests.strategies import complex_matrices, windows


def test_window_validation():
    with pytest.raises(InvalidWindowError):
        Window(2.0, 1.0)
    with pytest.raises(InvalidWindowError):
        Window(0.0, 1.0)
    with pytest.raises(InvalidWindowError):
        Window(1.0, math.inf)
    with pytest.raises(InputError):
        Window.parse('1;2')
    assert Window.parse('0.5,2') == Window(0.5, 2.0)
    assert Window.from_dict(Window(1, 3).to_dict()) == Window(1.0, 3.0)


def test_window_constants():
    c = Window(1.0, 4.0).constants()
    assert c.mu == 2.5
    assert c.r == 1.5
    assert c.K == pytest.approx(1.25)
    assert c.diff == 3.0
    assert c.c1 == pytest.approx(0.2)
    assert c.c2 == pytest.approx(2.25)
    assert c.lowK == pytest.approx(0.8)
    assert c.sq == pytest.approx(0.32)
    assert c.c2_tight == pytest.approx(0.25)
    assert Window.from_center(2.5, 1.5) == Window(1.0, 4.0)


def test_transform_of_worked_matrix():
    A = [[5 - 4j, 2j], [1 + 1j, 6]]
    C = transform_C(A, Window(4.0, 50.0))
    assert np.allclose(C, [[27 - 184j, 6 + 92j], [52 + 46j, 84]])
    assert accretive_via_disk(A, Window(4.0, 50.0))


def test_scalar_transform():
    # C(aI) = (M - conj(a))(a - m) I
    a = 2 + 0.5j
    w = Window(1.0, 4.0)
    C = transform_C(a * np.eye(2), w)
    assert np.allclose(C, (4 - np.conj(a)) * (a - 1) * np.eye(2))


@given(strategies.data())
def test_real_part_identity(data):
    A = data.draw(complex_matrices())
    w = data.draw(windows())
    assert identity_residual(A, w) <= 1e-12 * identity_scale(A, w)


@given(strategies.data())
def test_disk_criterion_matches_direct_accretivity(data):
    A = data.draw(complex_matrices())
    w = data.draw(windows())
    distance = spectral_norm(A - w.mu * identity(A.shape[0]))
    assume(abs(distance ** 2 - w.r ** 2) > 1e-6 * max(1.0, distance ** 2, w.r ** 2))
    direct = is_psd(hermitian_part(transform_C(A, w)))
    assert direct == accretive_via_disk(A, w)


@given(strategies.data())
def test_prop_checks_never_fail(data):
    A = data.draw(complex_matrices())
    w = data.draw(windows())
    verdicts = prop_checks(A, w)
    assert [v.case_id for v in verdicts] == [f'prop.{k}' for k in range(1, 8)]
    assert not any(v.failed for v in verdicts)


def test_prop_checks_on_disk_instance():
    spec = GeneratorSpec(kind=KIND_DISK, dim=3, seed=7, mu=2.0, r=1.0, dissipative=True)
    A, w = gen_disk(spec)
    verdicts = {v.case_id: v for v in prop_checks(A, w)}
    assert verdicts['prop.6'].hypothesis_met and verdicts['prop.6'].passed
    assert verdicts['prop.7'].hypothesis_met and verdicts['prop.7'].passed
    assert is_dissipative(A)


def test_normal_and_selfadjoint_equivalences():
    w = Window(1.0, 3.0)
    normal = prop_checks(np.diag([1.0 + 1j, 2.0]), w)
    assert normal[0].passed and normal[0].sub_verdicts[1].details['left']
    selfadjoint = prop_checks(np.array([[2.0, 1.0], [1.0, 2.0]]), w)
    assert selfadjoint[1].passed and selfadjoint[1].sub_verdicts[1].details['right']


def test_prop6_not_met_flags_converse_counterexample():
    # accretive A far outside the disk of (1, 2)
    A = np.diag([10.0, 20.0])
    verdict = prop_checks(A, Window(1.0, 2.0))[5]
    assert verdict.status == STATUS_NOT_MET
    assert verdict.details['converse_counterexample'] is True


def test_converse_counterexamples_exist(rng):
    found = find_converse_counterexamples(rng, trials=50)
    assert found
    for item in found:
        A, w = item['matrix'], item['window']
        assert is_accretive(A) and is_dissipative(A)
        assert not accretive_via_disk(A, w)
