"""
Verdict Module

Structured outcome of one inequality check. Verdicts are three-valued: a
check whose hypothesis is not met never reports pass or fail.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional

import numpy as np


STATUS_PASS = 'pass'
STATUS_FAIL = 'fail'
STATUS_BOUNDARY = 'boundary'
STATUS_NOT_MET = 'hypothesis_not_met'

RELATION_LOEWNER = 'loewner'
RELATION_SCALAR = 'scalar'


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check.

    For Loewner relations ``slack`` is lambda_min(RHS - LHS) and
    ``lhs_summary``/``rhs_summary`` are the spectral norms of the two sides.
    For scalar relations ``slack`` is (rhs - lhs) / max(1, |rhs|).
    """

    case_id: str
    hypothesis_met: bool
    relation: str
    lhs_summary: float
    rhs_summary: float
    slack: float
    normalized_slack: float
    passed: bool
    status: str
    details: Dict[str, Any] = field(default_factory=dict)
    sub_verdicts: List['Verdict'] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.hypothesis_met and not self.passed

    def with_case_id(self, case_id: str) -> 'Verdict':
        return replace(self, case_id=case_id)

    def find(self, case_id: str) -> Optional['Verdict']:
        """Depth-first lookup of a verdict (or sub-verdict) by case id."""
        if self.case_id == case_id:
            return self
        for sub in self.sub_verdicts:
            found = sub.find(case_id)
            if found is not None:
                return found
        return None

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to a JSON-ready dictionary with every field."""
        return {
            'case_id': self.case_id,
            'hypothesis_met': bool(self.hypothesis_met),
            'relation': self.relation,
            'lhs_summary': jsonable(self.lhs_summary),
            'rhs_summary': jsonable(self.rhs_summary),
            'slack': jsonable(self.slack),
            'normalized_slack': jsonable(self.normalized_slack),
            'pass': bool(self.passed),
            'status': self.status,
            'details': jsonable(self.details),
            'sub_verdicts': [sub.to_dict() for sub in self.sub_verdicts],
        }


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, arrays and complex numbers to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return value
    return value


def scalar_verdict(case_id: str, lhs: float, rhs: float, tol_rel: float,
                   allowance: float = 0.0,
                   details: Optional[Dict[str, Any]] = None) -> Verdict:
    """Build a verdict for the scalar inequality lhs <= rhs.

    Args:
        case_id: Registry id of the check
        lhs: Left-hand side value
        rhs: Right-hand side value
        tol_rel: Relative tolerance
        allowance: Extra absolute slack granted on top of tol_rel (used for
            certified enclosure widths)
        details: Diagnostics stored on the verdict

    Returns:
        Verdict with relation 'scalar'
    """
    lhs = float(lhs)
    rhs = float(rhs)
    raw = rhs - lhs
    norm = max(1.0, abs(rhs))
    slack = raw / norm
    passed = raw >= -(tol_rel * norm + allowance)
    info = dict(details or {})
    if allowance:
        info['allowance'] = allowance
    return Verdict(
        case_id=case_id,
        hypothesis_met=True,
        relation=RELATION_SCALAR,
        lhs_summary=lhs,
        rhs_summary=rhs,
        slack=slack,
        normalized_slack=slack,
        passed=bool(passed),
        status=STATUS_PASS if passed else STATUS_FAIL,
        details=info,
    )


def equivalence_verdict(case_id: str, left: bool, right: bool, boundary: bool = False,
                        details: Optional[Dict[str, Any]] = None) -> Verdict:
    """Verdict for an equivalence 'left <=> right'.

    Instances within tolerance of the boundary of either side are recorded
    as 'boundary' and never fail.
    """
    info = dict(details or {})
    info.update({'left': bool(left), 'right': bool(right)})
    agree = bool(left) == bool(right)
    if boundary and not agree:
        status = STATUS_BOUNDARY
    else:
        status = STATUS_PASS if agree else STATUS_FAIL
    passed = status != STATUS_FAIL
    slack = 0.0 if passed else -1.0
    return Verdict(
        case_id=case_id,
        hypothesis_met=True,
        relation=RELATION_SCALAR,
        lhs_summary=float(bool(left)),
        rhs_summary=float(bool(right)),
        slack=slack,
        normalized_slack=slack,
        passed=passed,
        status=status,
        details=info,
    )


def not_met(case_id: str, relation: str, reason: str,
            details: Optional[Dict[str, Any]] = None) -> Verdict:
    """Verdict for a check whose hypothesis fails: no pass/fail is emitted."""
    info = dict(details or {})
    info['reason'] = reason
    return Verdict(
        case_id=case_id,
        hypothesis_met=False,
        relation=relation,
        lhs_summary=float('nan'),
        rhs_summary=float('nan'),
        slack=float('nan'),
        normalized_slack=float('nan'),
        passed=False,
        status=STATUS_NOT_MET,
        details=info,
    )


def combine(case_id: str, verdicts: Iterable[Verdict],
            informational: Iterable[Verdict] = (),
            details: Optional[Dict[str, Any]] = None) -> Verdict:
    """Fold several normative verdicts into one.

    The combined verdict passes only if all parts pass; its slack is the
    tightest part. Informational verdicts are attached but never affect the
    outcome.
    """
    parts = list(verdicts)
    extra = list(informational)
    if not parts:
        raise ValueError('combine() needs at least one verdict')

    if not all(v.hypothesis_met for v in parts):
        reasons = [v.details.get('reason', v.case_id) for v in parts if not v.hypothesis_met]
        verdict = not_met(case_id, parts[0].relation, '; '.join(reasons), details)
        return replace(verdict, sub_verdicts=parts + extra)

    worst = min(parts, key=lambda v: v.normalized_slack)
    passed = all(v.passed for v in parts)
    if not passed:
        status = STATUS_FAIL
    elif any(v.status == STATUS_BOUNDARY for v in parts):
        status = STATUS_BOUNDARY
    else:
        status = STATUS_PASS
    relations = {v.relation for v in parts}
    return Verdict(
        case_id=case_id,
        hypothesis_met=True,
        relation=worst.relation if len(relations) > 1 else parts[0].relation,
        lhs_summary=worst.lhs_summary,
        rhs_summary=worst.rhs_summary,
        slack=worst.slack,
        normalized_slack=worst.normalized_slack,
        passed=passed,
        status=status,
        details=dict(details or {}),
        sub_verdicts=parts + extra,
    )
