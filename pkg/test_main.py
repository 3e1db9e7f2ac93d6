import json
import logging
from pathlib import Path

import pytest

from main import EXIT_FALSIFIED, EXIT_INPUT_ERROR, EXIT_VERIFIED, build_parser, configure_logging, run

HERE = Path(__file__).parent
FIG8 = str(HERE / 'fig8.tri')


def test_parser_maps_flags_onto_config_names():
    args = build_parser().parse_args(['coproduct', '--strands', '2', '--random', '5', '--max', '1', '--workers', '2'])
    assert (args.coproduct_strands, args.random_cases, args.aij_max, args.workers) == (2, 5, 1, 2)


def test_pentagon_verified(capsys):
    assert run(['pentagon', '--max-weight', '2']) == EXIT_VERIFIED
    assert 'VERIFIED' in capsys.readouterr().out


def test_injected_error_falsifies(capsys):
    assert run(['pentagon', '--max-weight', '2', '--inject-error']) == EXIT_FALSIFIED
    out = capsys.readouterr().out
    assert 'offending classes: injected' in out


def test_gl1_pentagon():
    assert run(['pentagon', '--gl1', '--max-weight', '3', '--quiet']) == EXIT_VERIFIED


def test_dilog_json_output(tmp_path, capsys):
    target = tmp_path / 'dilog.json'
    code = run(['dilog', '--max-degree', '2', '--which', 'recurrence', '--format', 'json', '--output', str(target)])
    assert code == EXIT_VERIFIED
    assert json.loads(capsys.readouterr().out)['identity'] == 'dilog recurrence'
    assert json.loads(target.read_text())['verdict'] == 'VERIFIED'


def test_small_algebra_verbs():
    assert run(['aij', '--max', '1', '--quiet']) == EXIT_VERIFIED
    assert run(['unknot-id', '--max-size', '2', '--quiet']) == EXIT_VERIFIED
    assert run(['coproduct', '--strands', '2', '--length', '2', '--max-degree', '2', '--max', '1',
                '--random', '0', '--quiet']) == EXIT_VERIFIED


def test_lift_of_kink_file(capsys):
    assert run(['lift', '--diagram', str(HERE / 'kink.diag')]) == EXIT_VERIFIED
    out = capsys.readouterr().out
    assert '3 lifts over a planar chart' in out
    assert 'open strands on sheets (1,)' in out


def test_lift_of_annular_braid(capsys):
    assert run(['lift', '--braid', 's1', '--closure', 'annular']) == EXIT_VERIFIED
    assert 'annular chart' in capsys.readouterr().out


def test_lift_on_torus_chart(capsys):
    code = run(['lift', '--diagram', str(HERE / 'torus_curve.diag'), '--chart', str(HERE / 'torus.chart'),
                '--target', 'gl1'])
    assert code == EXIT_VERIFIED
    assert '1 lifts over a torus chart' in capsys.readouterr().out


def test_weight_zero_injected_error():
    assert run(['pentagon', '--max-weight', '0', '--inject-error', '--quiet']) == EXIT_FALSIFIED


def test_all_markings_lists_four(capsys):
    assert run(['effectivity', '--triangulation', FIG8, '--all-markings']) == EXIT_VERIFIED
    summary = [line for line in capsys.readouterr().out.splitlines() if line.startswith('effective markings:')]
    assert summary[0].count(')') == 4


def test_effectivity_exists():
    assert run(['effectivity', '--triangulation', FIG8, '--exists', '--quiet']) == EXIT_VERIFIED


def test_single_marking(capsys):
    assert run(['effectivity', '--triangulation', FIG8, '--marking', 'theta, theta']) == EXIT_VERIFIED
    assert 'not effective' in capsys.readouterr().out
    assert run(['effectivity', '--triangulation', FIG8, '--marking', 'theta, theta', '--exists']) == EXIT_FALSIFIED


def test_selftest_single_phase(capsys):
    assert run(['selftest', '--phase', 'effectivity']) == EXIT_VERIFIED
    assert 'SELFTEST SUMMARY' in capsys.readouterr().out


@pytest.mark.parametrize('argv', [
    ['bogus'],
    ['pentagon', '--max-weight', 'x'],
    ['lift'],
    ['lift', '--diagram', 'missing.diag'],
    ['effectivity', '--triangulation', FIG8, '--marking', 'eta'],
    ['selftest', '--phase', 'nope'],
    ['dilog', '--which', 'nope', '--max-degree', '1'],
])
def test_input_errors(argv):
    assert run(argv) == EXIT_INPUT_ERROR


def test_help_exits_cleanly(capsys):
    assert run(['--help']) == EXIT_VERIFIED
    assert 'selftest' in capsys.readouterr().out


def test_bad_diagram_file(tmp_path):
    path = tmp_path / 'broken.diag'
    path.write_text('arc e0 in:0 out:1\n')
    assert run(['lift', '--diagram', str(path)]) == EXIT_INPUT_ERROR


def test_logging_level_follows_flags():
    configure_logging(quiet=True)
    assert logging.getLogger().level == logging.WARNING
    configure_logging(verbose=True)
    assert logging.getLogger().level == logging.DEBUG
    configure_logging()
    assert logging.getLogger().level == logging.INFO
