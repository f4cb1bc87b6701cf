import json

import pytest

from verifier_config import ENV_COMMAND, ConfigError, VerifierConfig, load_config


def write_config(tmp_path, config):
    path = tmp_path / 'verifier_config.json'
    path.write_text(json.dumps(config), encoding='utf-8')
    return str(path)


def test_defaults_when_the_file_is_missing(tmp_path):
    config = VerifierConfig(str(tmp_path / 'missing.json'))
    assert config.command == ['dafny', 'verify', '{file}']
    assert config.timeout_seconds == 20.0
    assert config.classify_by == 'output'
    assert config.exit_codes['4'] == 'Killed'


def test_file_values_override_defaults(tmp_path):
    path = write_config(tmp_path, {
        'command': ['dafny', 'verify', '--cores', '1', '{file}'],
        'timeout_seconds': 60,
        'classify_by': 'exit_code',
        'exit_codes': {0: 'Alive', 4: 'Killed', 3: 'TimedOut'},
    })
    config = VerifierConfig(path)
    assert config.command[2:4] == ['--cores', '1']
    assert config.timeout_seconds == 60.0
    assert config.classify_by == 'exit_code'
    assert config.exit_codes == {'0': 'Alive', '4': 'Killed', '3': 'TimedOut'}
    assert 'summary' in config.patterns


def test_environment_overrides_the_command(tmp_path, monkeypatch):
    path = write_config(tmp_path, {'command': ['dafny', 'verify', '{file}']})
    monkeypatch.setenv(ENV_COMMAND, '/opt/dafny/dafny verify --allow-warnings')
    config = VerifierConfig(path)
    assert config.command == ['/opt/dafny/dafny', 'verify', '--allow-warnings', '{file}']
    monkeypatch.setenv(ENV_COMMAND, 'wrapper {file} --quiet')
    assert VerifierConfig(path).command == ['wrapper', '{file}', '--quiet']


def test_explicit_timeout_wins(tmp_path):
    path = write_config(tmp_path, {'timeout_seconds': 60})
    assert load_config(path, 5).timeout_seconds == 5.0
    assert load_config(path).timeout_seconds == 60.0
    with pytest.raises(ConfigError):
        load_config(path, 0)


@pytest.mark.parametrize('config', [
    [],
    {'command': 'dafny verify {file}'},
    {'command': []},
    {'command': ['dafny', 'verify']},
    {'timeout_seconds': 0},
    {'timeout_seconds': -3},
    {'timeout_seconds': True},
    {'classify_by': 'stderr'},
    {'patterns': {'summary': '(unclosed'}},
    {'exit_codes': {'0': 'Passed'}},
])
def test_bad_configs_are_rejected(tmp_path, config):
    with pytest.raises(ConfigError):
        VerifierConfig(write_config(tmp_path, config))


def test_malformed_json_is_a_config_error(tmp_path):
    path = tmp_path / 'verifier_config.json'
    path.write_text('{"command": [', encoding='utf-8')
    with pytest.raises(ConfigError):
        VerifierConfig(str(path))


def test_save_and_reload(tmp_path):
    path = str(tmp_path / 'saved.json')
    config = VerifierConfig(path)
    config.command = ['dafny', 'verify', '--verification-time-limit', '30', '{file}']
    config.timeout_seconds = 45.5
    config.save_config()
    reloaded = VerifierConfig(path)
    assert reloaded.to_dict() == config.to_dict()
