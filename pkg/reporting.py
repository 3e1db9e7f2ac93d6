import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import pandas as pd

logger = logging.getLogger(__name__)

VERIFIED = 'VERIFIED'
FALSIFIED = 'FALSIFIED'


@dataclass
class ResidualEntry:
    """Residual of one graded piece (a class, a degree, a case)."""
    grading: str
    value: str
    zero: bool

    @classmethod
    def of(cls, grading: Any, residual: Any) -> 'ResidualEntry':
        """Wrap any exact value exposing ``is_zero()``."""
        is_zero = residual.is_zero() if hasattr(residual, 'is_zero') else not residual
        return cls(str(grading), '0' if is_zero else str(residual), bool(is_zero))


@dataclass
class VerificationReport:
    identity: str
    parameter: Any
    residuals: List[ResidualEntry] = field(default_factory=list)
    seconds: float = 0.0
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return VERIFIED if all(r.zero for r in self.residuals) else FALSIFIED

    @property
    def verified(self) -> bool:
        return self.verdict == VERIFIED

    def failures(self) -> List[ResidualEntry]:
        return [r for r in self.residuals if not r.zero]

    def add(self, grading: Any, residual: Any) -> None:
        self.residuals.append(ResidualEntry.of(grading, residual))

    def inject_fake_residual(self, grading: str = 'injected') -> 'VerificationReport':
        """Test hook: append a nonzero residual so the falsification path runs."""
        self.residuals.append(ResidualEntry(grading, '1', False))
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            'identity': self.identity,
            'parameter': self.parameter,
            'residuals': [{'class': r.grading, 'value': r.value} for r in self.residuals],
            'verdict': self.verdict,
            'seconds': round(self.seconds, 3),
        }


def build_report(identity: str, parameter: Any, residuals: Iterable[Tuple[Any, Any]],
                 started: Optional[float] = None, **notes: Any) -> VerificationReport:
    """Collect (grading, residual) pairs into a report timed from ``started``."""
    report = VerificationReport(identity, parameter, notes=dict(notes))
    for grading, residual in residuals:
        report.add(grading, residual)
    if started is not None:
        report.seconds = time.perf_counter() - started
    logger.info("%s (%s): %s in %.2fs", identity, parameter, report.verdict, report.seconds)
    return report


def merge_reports(identity: str, parameter: Any, reports: Iterable[VerificationReport]) -> VerificationReport:
    merged = VerificationReport(identity, parameter)
    for rep in reports:
        for r in rep.residuals:
            merged.residuals.append(ResidualEntry(f"{rep.identity}:{r.grading}", r.value, r.zero))
        merged.seconds += rep.seconds
    return merged


def parse_json(text: str) -> VerificationReport:
    """Inverse of the json rendering."""
    try:
        data = json.loads(text)
        report = VerificationReport(
            identity=data['identity'],
            parameter=data['parameter'],
            residuals=[ResidualEntry(r['class'], r['value'], r['value'] == '0') for r in data['residuals']],
            seconds=float(data.get('seconds', 0.0)),
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        logger.error("Malformed report json: %s", exc)
        raise ValueError(f"Malformed report json: {exc}") from exc
    if data.get('verdict') not in (None, report.verdict):
        raise ValueError(f"Stored verdict {data['verdict']} disagrees with residuals")
    return report


class ReportWriter:
    """Text and json rendering of verification reports."""

    def __init__(self, width: int = 60):
        self.width = width

    def render(self, report: VerificationReport, fmt: str = 'text') -> str:
        renderers = {
            'text': self._render_text,
            'json': self._render_json,
        }
        if fmt not in renderers:
            raise ValueError(f"Unsupported format: {fmt}. Choose from {list(renderers.keys())}")
        return renderers[fmt](report)

    def _render_json(self, report: VerificationReport) -> str:
        return json.dumps(report.to_dict(), indent=2, default=str)

    def _render_text(self, report: VerificationReport) -> str:
        lines = [f" {report.identity} ".center(self.width, '='),
                 f"parameter: {report.parameter}"]
        if report.residuals:
            table = pd.DataFrame([{'class': r.grading, 'residual': r.value} for r in report.residuals])
            lines.append(table.to_string(index=False))
        else:
            lines.append('(no graded components)')
        failures = report.failures()
        if failures:
            lines.append('offending classes: ' + ', '.join(r.grading for r in failures))
        lines.append(f"time: {report.seconds:.2f}s")
        lines.append(report.verdict)
        return '\n'.join(lines)

    def save(self, report: VerificationReport, path) -> Path:
        path = Path(path)
        with open(path, 'w') as f:
            json.dump(report.to_dict(), f, indent=2, default=str)
        logger.info("Report saved to %s", path)
        return path

    def summary_table(self, reports: Iterable[VerificationReport]) -> pd.DataFrame:
        rows = [{
            'identity': r.identity,
            'parameter': r.parameter,
            'classes': len(r.residuals),
            'failures': len(r.failures()),
            'seconds': round(r.seconds, 2),
            'verdict': r.verdict,
        } for r in reports]
        return pd.DataFrame(rows, columns=['identity', 'parameter', 'classes', 'failures', 'seconds', 'verdict'])

    def render_summary(self, reports: List[VerificationReport]) -> str:
        table = self.summary_table(reports)
        overall = VERIFIED if all(r.verified for r in reports) else FALSIFIED
        return '\n'.join([" SELFTEST SUMMARY ".center(self.width, '='), table.to_string(index=False), overall])
