import json

import pytest

from reporting import (
    FALSIFIED,
    VERIFIED,
    ReportWriter,
    ResidualEntry,
    VerificationReport,
    build_report,
    merge_reports,
    parse_json,
)
from scalars import Scalar


def test_verdict_follows_residuals():
    report = build_report('identity', 3, [('(1,0)', Scalar.zero()), ('(0,1)', Scalar.zero())])
    assert report.verdict == VERIFIED
    report.add('(1,1)', Scalar.var('a'))
    assert report.verdict == FALSIFIED
    assert [r.grading for r in report.failures()] == ['(1,1)']


def test_empty_report_is_verified():
    assert VerificationReport('nothing', 0).verified


def test_residual_entry_accepts_plain_numbers():
    assert ResidualEntry.of('x', 0).zero
    assert not ResidualEntry.of('x', 2).zero


def test_injected_residual_falsifies():
    report = build_report('identity', 1, [('all', Scalar.zero())])
    assert not report.inject_fake_residual().verified


def test_merge_prefixes_identities():
    first = build_report('first', 1, [('a', 0)])
    second = build_report('second', 1, [('b', 1)])
    merged = merge_reports('both', 'all', [first, second])
    assert [r.grading for r in merged.residuals] == ['first:a', 'second:b']
    assert not merged.verified


def test_json_rendering_parses_back():
    report = build_report('pentagon', 4, [('(1,0)', Scalar.zero()), ('(1,1)', Scalar.var('a'))])
    text = ReportWriter().render(report, 'json')
    assert json.loads(text)['verdict'] == FALSIFIED
    again = parse_json(text)
    assert again.identity == 'pentagon'
    assert [r.zero for r in again.residuals] == [True, False]


@pytest.mark.parametrize('text', ['{', '{"identity": "x"}'])
def test_parse_json_errors(text):
    with pytest.raises(ValueError, match="Malformed"):
        parse_json(text)


def test_stored_verdict_must_agree():
    text = json.dumps({'identity': 'x', 'parameter': 1, 'residuals': [{'class': 'a', 'value': '1'}],
                       'verdict': VERIFIED})
    with pytest.raises(ValueError, match="disagrees"):
        parse_json(text)


def test_text_rendering_lists_offending_classes():
    report = build_report('sw wall-crossing', 6, [('(0,2)', Scalar.one())])
    text = ReportWriter().render(report)
    assert 'offending classes: (0,2)' in text
    assert text.splitlines()[-1] == FALSIFIED


def test_unknown_format():
    with pytest.raises(ValueError, match="Unsupported format"):
        ReportWriter().render(VerificationReport('x', 0), 'yaml')


def test_save_writes_json(tmp_path):
    path = ReportWriter().save(build_report('x', 0, [('a', 0)]), tmp_path / 'report.json')
    assert json.loads(path.read_text())['verdict'] == VERIFIED


def test_summary_table():
    reports = [build_report('x', 0, [('a', 0)]), build_report('y', 0, [('b', 1)])]
    table = ReportWriter().summary_table(reports)
    assert table['failures'].tolist() == [0, 1]
    assert ReportWriter().render_summary(reports).endswith(FALSIFIED)
