"""
Sweep Manager Module

Deterministic randomized sweeps over the catalog: per-trial seeds from a
stable hash, hypothesis-aware instances, associative aggregation of the
verdicts and JSON/CSV reports.
"""

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from typing import Any, Dict, List, Optional, Tuple

import click

from .catalog import REGISTRY, evaluate_case
from .errors import AccretiveError, InputError
from .generators import (DEFAULT_FILL, DISTRIBUTION, HASH_SCHEME, MAX_SEED,
                         RNG_NAME, build_instance, stable_hash)
from .linalg_core import DEFAULT_TOL, Tolerance
from .numrad import DEFAULT_EPS
from .verdict import STATUS_BOUNDARY, Verdict, jsonable


BOUNDARY_TOL = 1e-6
MIN_DIM = 2
MAX_DIM = 64
PCG64_MULTIPLIER = '0x2360ed051fc65da44385df649fccf645'
CSV_COLUMNS = ('case_id', 'trials', 'hyp_met', 'pass', 'fail', 'min_slack', 'argmin_seed')


@dataclass(frozen=True)
class SweepConfig:
    """Everything that determines a sweep report."""

    master_seed: int = 0
    trials: int = 100
    dims: Tuple[int, ...] = (2, 3, 4, 5, 6)
    tol: Tolerance = DEFAULT_TOL
    eps: float = DEFAULT_EPS
    case_filter: Optional[str] = None
    fill: float = DEFAULT_FILL
    workers: int = 1
    boundary: bool = False
    failure_dir: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'dims', tuple(int(d) for d in self.dims))
        if not 0 <= self.master_seed < MAX_SEED:
            raise InputError(f'master_seed must be a 64-bit unsigned integer, got {self.master_seed}')
        if self.trials < 1:
            raise InputError(f'trials must be at least 1, got {self.trials}')
        if not self.dims or any(not MIN_DIM <= d <= MAX_DIM for d in self.dims):
            raise InputError(f'dims must be a non-empty subset of [{MIN_DIM}, {MAX_DIM}], got {list(self.dims)}')
        if not self.eps > 0:
            raise InputError(f'eps must be positive, got {self.eps}')
        if not 0 < self.fill <= 1:
            raise InputError(f'fill must lie in (0, 1], got {self.fill}')
        if self.workers < 1:
            raise InputError(f'workers must be at least 1, got {self.workers}')

    @property
    def effective_fill(self) -> float:
        return 1.0 if self.boundary else self.fill

    @property
    def effective_tol(self) -> Tolerance:
        if self.boundary and self.tol.rel < BOUNDARY_TOL:
            return Tolerance(BOUNDARY_TOL)
        return self.tol

    def case_ids(self) -> List[str]:
        """Registered ids matching the filter: a glob pattern, or a prefix when it has no wildcard."""
        ids = sorted(REGISTRY)
        pattern = self.case_filter
        if not pattern:
            return ids
        if any(ch in pattern for ch in '*?['):
            return [case_id for case_id in ids if fnmatchcase(case_id, pattern)]
        return [case_id for case_id in ids if case_id.startswith(pattern)]

    def environment(self) -> Dict[str, Any]:
        """Fingerprint recorded in the report; excludes workers and output paths."""
        return {
            'master_seed': self.master_seed,
            'trials': self.trials,
            'dims': list(self.dims),
            'tol_rel': self.effective_tol.rel,
            'eps': self.eps,
            'fill': self.effective_fill,
            'boundary': self.boundary,
            'case_filter': self.case_filter,
            'rng': RNG_NAME,
            'rng_constants': {'multiplier': PCG64_MULTIPLIER, 'seeding': 'numpy.random.SeedSequence'},
            'trial_seed_hash': HASH_SCHEME,
            'distribution': DISTRIBUTION,
        }


@dataclass
class CaseStats:
    """Per-case aggregate; merge() is associative and commutative."""

    case_id: str
    trials: int = 0
    hyp_met: int = 0
    passed: int = 0
    failed: int = 0
    boundary: int = 0
    min_slack: Optional[float] = None
    argmin_seed: Optional[int] = None
    errors: Dict[str, int] = field(default_factory=dict)
    failure_seeds: List[int] = field(default_factory=list)

    def _offer_slack(self, slack: float, seed: int):
        if math.isnan(slack):
            return
        if (self.min_slack is None or slack < self.min_slack
                or (slack == self.min_slack and seed < self.argmin_seed)):
            self.min_slack = slack
            self.argmin_seed = seed

    def record(self, verdict: Verdict, seed: int):
        self.trials += 1
        if not verdict.hypothesis_met:
            return
        self.hyp_met += 1
        if verdict.passed:
            self.passed += 1
            if verdict.status == STATUS_BOUNDARY:
                self.boundary += 1
        else:
            self.failed += 1
            self.failure_seeds.append(seed)
        self._offer_slack(verdict.normalized_slack, seed)

    def record_error(self, error: Exception):
        self.trials += 1
        name = type(error).__name__
        self.errors[name] = self.errors.get(name, 0) + 1

    def merge(self, other: 'CaseStats') -> 'CaseStats':
        if other.case_id != self.case_id:
            raise InputError(f'Cannot merge statistics of {self.case_id} and {other.case_id}')
        merged = CaseStats(
            case_id=self.case_id,
            trials=self.trials + other.trials,
            hyp_met=self.hyp_met + other.hyp_met,
            passed=self.passed + other.passed,
            failed=self.failed + other.failed,
            boundary=self.boundary + other.boundary,
            min_slack=self.min_slack,
            argmin_seed=self.argmin_seed,
            errors=dict(self.errors),
            failure_seeds=sorted(self.failure_seeds + other.failure_seeds),
        )
        for name, count in other.errors.items():
            merged.errors[name] = merged.errors.get(name, 0) + count
        if other.min_slack is not None:
            merged._offer_slack(other.min_slack, other.argmin_seed)
        return merged

    def to_dict(self) -> Dict[str, Any]:
        return {
            'trials': self.trials,
            'hyp_met': self.hyp_met,
            'pass': self.passed,
            'fail': self.failed,
            'boundary': self.boundary,
            'min_slack': self.min_slack,
            'argmin_seed': self.argmin_seed,
            'errors': dict(sorted(self.errors.items())),
            'failure_seeds': sorted(self.failure_seeds),
        }


@dataclass
class TrialBatch:
    """Result of a contiguous range of trial indices of one case."""

    stats: CaseStats
    failures: List[Dict[str, Any]] = field(default_factory=list)
    error_messages: List[str] = field(default_factory=list)


def run_trials(config: SweepConfig, case_id: str, start: int, stop: int) -> TrialBatch:
    """Evaluate trial indices [start, stop) of one case. Pure apart from the returned batch."""
    batch = TrialBatch(stats=CaseStats(case_id))
    tol = config.effective_tol
    for index in range(start, stop):
        seed = stable_hash(config.master_seed, case_id, index)
        dim = config.dims[index % len(config.dims)]
        try:
            instance = build_instance(case_id, seed, dim, config.effective_fill)
            verdict = evaluate_case(case_id, instance, tol, config.eps)
        except AccretiveError as e:
            batch.stats.record_error(e)
            batch.error_messages.append(f'{case_id} seed {seed}: {type(e).__name__}: {e}')
            continue
        batch.stats.record(verdict, seed)
        if verdict.failed:
            batch.failures.append({'instance': instance.to_dict(), 'verdict': verdict.to_dict()})
    return batch


def _run_chunk(args: Tuple[SweepConfig, str, int, int]) -> TrialBatch:
    return run_trials(*args)


@dataclass
class SweepReport:
    """Aggregated sweep outcome."""

    config: SweepConfig
    cases: Dict[str, CaseStats]

    @property
    def total_failures(self) -> int:
        return sum(stats.failed for stats in self.cases.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'environment': self.config.environment(),
            'cases': {case_id: self.cases[case_id].to_dict() for case_id in sorted(self.cases)},
            'total_failures': self.total_failures,
        }

    def to_json(self) -> str:
        """Stable serialization: sorted keys and no timestamps."""
        return json.dumps(jsonable(self.to_dict()), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for case_id in sorted(self.cases):
            s = self.cases[case_id]
            writer.writerow([
                case_id, s.trials, s.hyp_met, s.passed, s.failed,
                '' if s.min_slack is None else repr(s.min_slack),
                '' if s.argmin_seed is None else s.argmin_seed,
            ])
        return buffer.getvalue()

    def write(self, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.to_json())
            f.write('\n')

    def write_csv(self, path: str):
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(self.to_csv())


class SweepManager:
    """Runs a sweep and reports progress on stderr."""

    def __init__(self, config: SweepConfig, debug: bool = False):
        """Initialize sweep manager.

        Args:
            config: Sweep configuration
            debug: Print every per-trial error
        """
        self.config = config
        self.debug = debug

    def _chunks(self, case_ids: List[str]) -> List[Tuple[SweepConfig, str, int, int]]:
        size = math.ceil(self.config.trials / self.config.workers)
        chunks = []
        for case_id in case_ids:
            for start in range(0, self.config.trials, size):
                chunks.append((self.config, case_id, start, min(start + size, self.config.trials)))
        return chunks

    def run_sweep(self) -> SweepReport:
        """Run every selected case and aggregate.

        Returns:
            SweepReport; identical for any worker count
        """
        config = self.config
        case_ids = config.case_ids()
        if not case_ids:
            click.echo(f"⚠️  No catalog case matches {config.case_filter!r}", err=True)
            return SweepReport(config=config, cases={})

        click.echo(f"🚀 Starting sweep: {len(case_ids)} cases x {config.trials} trials "
                   f"(seed {config.master_seed}, dims {list(config.dims)})", err=True)
        chunks = self._chunks(case_ids)
        if config.workers > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                batches = list(pool.map(_run_chunk, chunks))
        else:
            batches = [_run_chunk(chunk) for chunk in chunks]

        stats = {case_id: CaseStats(case_id) for case_id in case_ids}
        failures = []
        for batch in batches:
            case_id = batch.stats.case_id
            stats[case_id] = stats[case_id].merge(batch.stats)
            failures.extend(batch.failures)
            if self.debug:
                for message in batch.error_messages:
                    click.echo(f"⚠️  {message}", err=True)

        for case_id in case_ids:
            self._print_summary(stats[case_id])
            if REGISTRY[case_id].recipe.startswith('bidisk'):
                click.echo(f"ℹ️  {case_id}: bi-disk windows all have M/m >= 3+2√2", err=True)

        if failures and config.failure_dir:
            for failure in sorted(failures, key=lambda f: (f['instance']['case_id'], f['instance']['seed'])):
                self._write_failure(failure)

        report = SweepReport(config=config, cases=stats)
        if report.total_failures:
            click.echo(f"❌ Sweep finished with {report.total_failures} failures", err=True)
        else:
            click.echo("✅ Sweep finished without failures", err=True)
        return report

    def _print_summary(self, s: CaseStats):
        icon = '❌' if s.failed else '✅'
        slack = 'n/a' if s.min_slack is None else f'{s.min_slack:.3e}'
        line = (f"{icon} {s.case_id}: {s.hyp_met}/{s.trials} hypothesis met, "
                f"{s.failed} failures, min slack {slack}")
        if s.errors:
            line += f", errors {dict(sorted(s.errors.items()))}"
        click.echo(line, err=True)

    def _write_failure(self, failure: Dict[str, Any]) -> Optional[str]:
        """Write one failing instance for replay with `check --instance`."""
        instance = failure['instance']
        path = os.path.join(self.config.failure_dir, f"{instance['case_id']}-{instance['seed']}.json")
        try:
            os.makedirs(self.config.failure_dir, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(jsonable(failure), f, indent=2, sort_keys=True)
        except OSError as e:
            click.echo(f"⚠️  Error writing failure artifact {path}: {e}", err=True)
            return None
        click.echo(f"📁 Failure artifact written: {path}", err=True)
        return path


def run_sweep(config: SweepConfig, debug: bool = False) -> SweepReport:
    return SweepManager(config, debug).run_sweep()
