import pytest

from config import Config
from selftest import SelfTest

SMALL = Config(max_degree=3, max_weight=3, sw_weight=2, gl1_weight=3, max_size=2, aij_max=1,
               coproduct_strands=2, coproduct_length=2, random_cases=5)


def test_phase_names():
    assert list(SelfTest(SMALL).phases()) == [
        'dilogarithm', 'pentagon', 'seiberg-witten', 'gl1', 'structure', 'coproduct', 'lift', 'effectivity']


def test_nothing_run_is_not_verified():
    assert not SelfTest(SMALL).verified


def test_unknown_phase():
    with pytest.raises(ValueError, match="Unsupported selftest phase"):
        SelfTest(SMALL).run(['nope'])


@pytest.mark.parametrize('phase', ['dilogarithm', 'pentagon', 'coproduct', 'effectivity'])
def test_quick_phases(phase):
    suite = SelfTest(SMALL)
    reports = suite.run([phase])
    assert reports
    assert suite.verified, [r.identity for r in reports if not r.verified]


@pytest.mark.slow
def test_full_run_at_small_sizes():
    suite = SelfTest(SMALL)
    suite.run()
    assert suite.verified


def test_coproduct_phase_runs_every_random_case():
    sweep = SelfTest(SMALL).run(['coproduct'])[-1]
    assert sweep.parameter == 'n<=2, len<=2, random=5'
    # 1 one-strand word, 6 two-strand rotation classes, 5 random braids
    assert sweep.notes['checked'] == 12
