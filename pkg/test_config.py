import argparse

import pytest

from config import Config


def test_defaults_validate():
    config = Config().validate()
    assert config.format == 'text'
    assert config.seed == 0


def test_environment_overrides():
    config = Config.from_env({'SKEINTRACE_MAX_WEIGHT': '3', 'SKEINTRACE_FORMAT': 'json', 'SKEINTRACE_WORKERS': '4'})
    assert config.max_weight == 3
    assert config.format == 'json'
    assert config.workers == 4


def test_environment_must_be_integer():
    with pytest.raises(ValueError, match="not an integer"):
        Config.from_env({'SKEINTRACE_SEED': 'abc'})


@pytest.mark.parametrize('overrides', [{'max_degree': -1}, {'format': 'xml'}, {'strand_bound': 0}, {'workers': -2}])
def test_invalid_values(overrides):
    with pytest.raises(ValueError):
        Config(**overrides).validate()


def test_non_integer_bound():
    with pytest.raises(TypeError):
        Config(max_weight='6').validate()


def test_negative_seed_is_allowed():
    assert Config(seed=-5).validate().seed == -5


def test_merged_ignores_none_and_unknown_keys():
    config = Config().merged({'max_weight': 2, 'sw_weight': None, 'verb': 'pentagon'})
    assert config.max_weight == 2
    assert config.sw_weight == Config().sw_weight


def test_from_args_layers_flags_over_environment(monkeypatch):
    monkeypatch.setenv('SKEINTRACE_MAX_SIZE', '2')
    monkeypatch.setenv('SKEINTRACE_AIJ_MAX', '1')
    namespace = argparse.Namespace(aij_max=3, max_size=None, verb='aij')
    config = Config.from_args(namespace)
    assert config.aij_max == 3
    assert config.max_size == 2
