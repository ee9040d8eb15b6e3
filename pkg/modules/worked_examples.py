"""
Worked Examples Module

Reproduces the two published worked examples end to end (transform values,
accretivity, scalar comparisons, numerical-radius enclosures) and tabulates
published value, computed value and their difference.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from .catalog import check_abs_vs_real, check_w_bounds, check_w_commutator
from .linalg_core import as_matrix, hermitian_part, is_psd, spectral_norm
from .numrad import numerical_radius
from .transform import Window, accretive_via_disk, transform_C
from .verdict import Verdict, jsonable


REMARK_MATRIX = [[5 - 4j, 2j], [1 + 1j, 6]]
REMARK_WINDOW = Window(4.0, 50.0)
REMARK_C = [[27 - 184j, 6 + 92j], [52 + 46j, 84]]
REMARK_LOWK_NORM = 3.56083
REMARK_HALF_NORM = 3.3991

EXAMPLE_MATRIX = [[2, 0], [-1, 4]]
EXAMPLE_WINDOW = Window(0.01, 8.0)
EXAMPLE_DIFF = 7.99
EXAMPLE_TWO_NORM = 8.31

ENTRY_TOL = 1e-9
ROUNDED_TOL = 1e-3


@dataclass(frozen=True)
class DemoRow:
    """Published value against computed value."""

    label: str
    published: Any
    computed: Any
    diff: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.diff <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return jsonable({
            'label': self.label,
            'published': self.published,
            'computed': self.computed,
            'diff': self.diff,
            'tolerance': self.tolerance,
            'ok': self.ok,
        })


@dataclass
class DemoReport:
    rows: List[DemoRow] = field(default_factory=list)
    discrepancies: List[Dict[str, Any]] = field(default_factory=list)
    verdicts: List[Verdict] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(row.ok for row in self.rows) and not any(v.failed for v in self.verdicts)

    def row(self, label: str) -> DemoRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(label)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rows': [row.to_dict() for row in self.rows],
            'discrepancies': jsonable(self.discrepancies),
            'verdicts': [v.to_dict() for v in self.verdicts],
            'all_ok': self.all_ok,
        }


def _flag(value: bool) -> float:
    return 1.0 if value else 0.0


def _remark(report: DemoReport):
    A = as_matrix(REMARK_MATRIX)
    w = REMARK_WINDOW
    C = transform_C(A, w)
    for i in range(2):
        for j in range(2):
            published = complex(REMARK_C[i][j])
            report.rows.append(DemoRow(f'remark.C[{i + 1},{j + 1}]', published, complex(C[i, j]),
                                       abs(C[i, j] - published), ENTRY_TOL))

    direct = is_psd(hermitian_part(C))
    disk = accretive_via_disk(A, w)
    report.rows.append(DemoRow('remark.accretive', 1.0, _flag(direct and disk),
                               abs(1.0 - _flag(direct and disk)), 0.0))

    norm = spectral_norm(A)
    lowK_norm = w.constants().lowK * norm
    report.rows.append(DemoRow('remark.lowK_norm', REMARK_LOWK_NORM, lowK_norm,
                               abs(lowK_norm - REMARK_LOWK_NORM), ROUNDED_TOL))
    report.rows.append(DemoRow('remark.half_norm', REMARK_HALF_NORM, norm / 2,
                               abs(norm / 2 - REMARK_HALF_NORM), ROUNDED_TOL))

    omega = numerical_radius(A)
    report.rows.append(DemoRow('remark.omega_lo', REMARK_LOWK_NORM, omega.lo,
                               max(0.0, REMARK_LOWK_NORM - omega.lo), 1e-6))

    C_sum = C + C.conj().T
    report.discrepancies.append({
        'label': 'remark.C_plus_C_star[1,2]',
        'printed': 54 + 46j,
        'computed': complex(C_sum[0, 1]),
        'note': 'printed matrix is not Hermitian; 58+46i expected at (1,2)',
    })
    report.verdicts.extend(check_w_bounds(A, w, omega=omega))
    report.verdicts.append(check_abs_vs_real(A, w))


def _example(report: DemoReport):
    A = as_matrix(EXAMPLE_MATRIX)
    w = EXAMPLE_WINDOW
    diff = w.M - w.m
    report.rows.append(DemoRow('example.diff', EXAMPLE_DIFF, diff, abs(diff - EXAMPLE_DIFF), 1e-12))

    two_norm = 2 * spectral_norm(A)
    report.rows.append(DemoRow('example.two_norm', EXAMPLE_TWO_NORM, two_norm,
                               abs(two_norm - EXAMPLE_TWO_NORM), 0.01))
    report.rows.append(DemoRow('example.improvement_margin', 0.0, two_norm - diff,
                               max(0.0, -(two_norm - diff)), 0.0))

    real_C = hermitian_part(transform_C(A, w))
    direct = is_psd(real_C)
    disk = accretive_via_disk(A, w)
    report.rows.append(DemoRow('example.accretive_direct', 1.0, _flag(direct), abs(1.0 - _flag(direct)), 0.0))
    report.rows.append(DemoRow('example.accretive_disk', 1.0, _flag(disk), abs(1.0 - _flag(disk)), 0.0))
    report.rows.append(DemoRow('example.ReC[2,2]', 15.96, float(real_C[1, 1].real),
                               abs(real_C[1, 1].real - 15.96), ENTRY_TOL))

    report.discrepancies.append({
        'label': 'example.ReC',
        'printed': [[551 / 50, -1601 / 200], [-1601 / 200, 399 / 25]],
        'computed': np.real(real_C).tolist(),
        'note': 'off-diagonal and (1,1) entries differ; both matrices are positive definite',
    })
    report.verdicts.append(check_w_commutator(A, np.eye(2), w))


def demo_paper() -> DemoReport:
    """Reproduce both worked examples."""
    report = DemoReport()
    _remark(report)
    _example(report)
    return report


def _fmt(value: Any) -> str:
    if isinstance(value, complex):
        return f'{value.real:.6g}{value.imag:+.6g}i'
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)


def format_table(report: DemoReport) -> str:
    """Human-readable table of published vs computed values."""
    header = f"{'label':<28} {'published':>18} {'computed':>18} {'|diff|':>11}  ok"
    lines = [header, '-' * len(header)]
    for row in report.rows:
        mark = '✅' if row.ok else '❌'
        lines.append(f'{row.label:<28} {_fmt(row.published):>18} {_fmt(row.computed):>18} '
                     f'{row.diff:>11.3e}  {mark}')
    for item in report.discrepancies:
        lines.append(f"ℹ️  {item['label']}: {item['note']}")
    return '\n'.join(lines)
