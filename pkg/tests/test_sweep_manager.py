import json
import os
import time

import pytest

from modules.catalog import REGISTRY
from modules.errors import InputError
from modules.generators import build_instance
from modules.linalg_core import Tolerance
from modules.sweep_manager import (CSV_COLUMNS, CaseStats, SweepConfig, SweepManager,
                                   run_sweep, run_trials)
from modules.verdict import not_met, scalar_verdict


def test_config_validation():
    with pytest.raises(InputError):
        SweepConfig(trials=0)
    with pytest.raises(InputError):
        SweepConfig(dims=(1, 2))
    with pytest.raises(InputError):
        SweepConfig(dims=())
    with pytest.raises(InputError):
        SweepConfig(master_seed=-1)
    with pytest.raises(InputError):
        SweepConfig(fill=0.0)
    with pytest.raises(InputError):
        SweepConfig(workers=0)


def test_case_filter_prefix_and_glob():
    prefix = SweepConfig(case_filter='thm.abs_real').case_ids()
    assert prefix == ['thm.abs_real.a', 'thm.abs_real.ainv', 'thm.abs_real.iastar']
    glob = SweepConfig(case_filter='w.commutator.*').case_ids()
    assert glob == ['w.commutator.minus', 'w.commutator.plus']
    assert SweepConfig(case_filter='nothing.here').case_ids() == []
    assert SweepConfig().case_ids() == sorted(REGISTRY)


def test_boundary_mode_settings():
    config = SweepConfig(boundary=True, tol=Tolerance(1e-10), fill=0.5)
    assert config.effective_fill == 1.0
    assert config.effective_tol.rel == 1e-6
    assert config.environment()['fill'] == 1.0
    loose = SweepConfig(boundary=True, tol=Tolerance(1e-3))
    assert loose.effective_tol.rel == 1e-3


def _stats(case_id, entries):
    stats = CaseStats(case_id)
    for slack, seed in entries:
        if slack is None:
            stats.record(not_met(case_id, 'scalar', 'no'), seed)
        else:
            stats.record(scalar_verdict(case_id, 0.0, slack, 1e-8), seed)
    return stats


def test_case_stats_merge_is_associative():
    a = _stats('x', [(0.5, 10), (None, 11)])
    b = _stats('x', [(-0.5, 20), (0.25, 21)])
    c = _stats('x', [(0.1, 30)])
    left = a.merge(b).merge(c)
    right = a.merge(b.merge(c))
    assert left.to_dict() == right.to_dict()
    assert left.to_dict() == c.merge(b).merge(a).to_dict()
    assert left.trials == 5 and left.hyp_met == 4 and left.failed == 1
    assert left.min_slack == pytest.approx(-0.5)
    assert left.argmin_seed == 20
    assert left.failure_seeds == [20]


def test_case_stats_tie_goes_to_smaller_seed():
    a = _stats('x', [(0.1, 50)])
    b = _stats('x', [(0.1, 7)])
    assert a.merge(b).argmin_seed == 7
    assert b.merge(a).argmin_seed == 7


def test_case_stats_merge_rejects_other_case():
    with pytest.raises(InputError):
        CaseStats('x').merge(CaseStats('y'))


def test_run_trials_counts():
    config = SweepConfig(trials=4, dims=(2, 3))
    batch = run_trials(config, 'thm.squared.a', 0, 4)
    assert batch.stats.trials == 4
    assert batch.stats.hyp_met == 4
    assert batch.stats.failed == 0
    assert not batch.failures


def test_sweep_is_deterministic(tmp_path):
    config = SweepConfig(master_seed=42, trials=3, dims=(2, 3), case_filter='thm.abs_real')
    first = run_sweep(config)
    second = run_sweep(config)
    assert first.to_json() == second.to_json()
    assert first.total_failures == 0
    report = json.loads(first.to_json())
    assert sorted(report['cases']) == ['thm.abs_real.a', 'thm.abs_real.ainv', 'thm.abs_real.iastar']
    assert report['environment']['master_seed'] == 42
    assert report['environment']['rng'] == 'numpy.PCG64'


def test_sweep_independent_of_worker_count():
    base = dict(master_seed=7, trials=4, dims=(2, 3), case_filter='cor.anticommutator')
    serial = run_sweep(SweepConfig(workers=1, **base))
    parallel = run_sweep(SweepConfig(workers=2, **base))
    assert serial.to_json() == parallel.to_json()


def test_empty_filter_gives_empty_report():
    report = run_sweep(SweepConfig(case_filter='nothing.here'))
    assert report.cases == {}
    assert report.total_failures == 0
    assert json.loads(report.to_json())['cases'] == {}


def test_block_triangle_is_never_met():
    report = run_sweep(SweepConfig(trials=3, dims=(2,), case_filter='thm.block_triangle'))
    stats = report.cases['thm.block_triangle']
    assert stats.trials == 3 and stats.hyp_met == 0
    assert stats.min_slack is None


def test_report_files(tmp_path):
    report = run_sweep(SweepConfig(trials=2, dims=(2,), case_filter='prop.norm_product'))
    json_path = tmp_path / 'report.json'
    csv_path = tmp_path / 'report.csv'
    report.write(str(json_path))
    report.write_csv(str(csv_path))
    assert json.loads(json_path.read_text())['total_failures'] == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == ','.join(CSV_COLUMNS)
    assert lines[1].startswith('prop.norm_product,2,2,2,0,')


def test_failure_artifact_is_written(tmp_path):
    config = SweepConfig(trials=1, dims=(2,), failure_dir=str(tmp_path / 'failures'))
    instance = build_instance('thm.squared.a', seed=123, n=2)
    failure = {'instance': instance.to_dict(), 'verdict': {'case_id': 'thm.squared.a'}}
    path = SweepManager(config)._write_failure(failure)
    assert path == os.path.join(str(tmp_path / 'failures'), 'thm.squared.a-123.json')
    with open(path, encoding='utf-8') as f:
        stored = json.load(f)
    assert stored['instance']['seed'] == 123


def test_tightness_near_disk_boundary():
    report = run_sweep(SweepConfig(trials=300, dims=(2, 3), case_filter='thm.abs_real.a', fill=0.999))
    stats = report.cases['thm.abs_real.a']
    assert report.total_failures == 0
    assert stats.hyp_met == 300
    assert -1e-8 <= stats.min_slack <= 0.05


def test_boundary_sweep_has_no_failures():
    report = run_sweep(SweepConfig(trials=5, dims=(2, 3), case_filter='thm.', boundary=True))
    assert report.cases
    assert report.total_failures == 0


def test_heaviest_cases_fit_the_trial_budget():
    config = SweepConfig(trials=10, dims=(6,))
    for case_id in ('cor.final', 'w.commutator.plus'):
        started = time.perf_counter()
        batch = run_trials(config, case_id, 0, 10)
        elapsed = time.perf_counter() - started
        assert batch.stats.failed == 0
        assert elapsed / 10 < 0.75


@pytest.mark.slow
def test_soundness_sweep():
    config = SweepConfig(master_seed=2024, trials=10_000, dims=(2, 3, 4, 5, 6),
                         workers=max(1, min(8, os.cpu_count() or 1)))
    started = time.perf_counter()
    report = run_sweep(config)
    elapsed = time.perf_counter() - started
    # scaled to four worker processes
    assert elapsed * config.workers / 4 < 600
    assert report.total_failures == 0
    for case_id, stats in report.cases.items():
        if case_id != 'thm.block_triangle':
            assert stats.hyp_met > 0
