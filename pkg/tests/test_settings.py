import pytest

from lynperm import settings
from lynperm.common import BoundExceededError, ConfigurationError


def test_defaults(tmpdir):
    with tmpdir.as_cwd():
        cfg = settings.load(environ={})
    assert cfg.bounds.lyndon == 7
    assert cfg.cli.output == 'json'
    assert cfg.cli.seed == 0


def test_config_file(tmpdir):
    tmpdir.join('lynperm.toml').write('[bounds]\nlyndon = 9\n'
                                      '[cli]\noutput = "text"\n')
    sub = tmpdir.mkdir('sub')
    assert settings.find_config(str(sub)) == tmpdir.join('lynperm.toml')
    with sub.as_cwd():
        cfg = settings.load(environ={})
    assert cfg.bounds.lyndon == 9
    assert cfg.bounds.density == settings.DEFAULTS['bounds']['density']
    assert cfg.cli.output == 'text'


def test_environment(tmpdir):
    path = tmpdir.join('other.toml')
    path.write('[witness]\nattempts = 3\n')
    cfg = settings.load(environ={'LYNPERM_CONFIG': str(path),
                                 'LYNPERM_MAX_SIZE': '4'})
    assert cfg.witness.attempts == 3
    assert all(v == 4 for v in cfg.bounds._values())

    with pytest.raises(ConfigurationError):
        settings.load(environ={'LYNPERM_MAX_SIZE': 'big'})


def test_bad_config(tmpdir):
    path = tmpdir.join('lynperm.toml')
    path.write('[nothing]\nx = 1\n')
    with pytest.raises(ConfigurationError):
        settings.load(str(path), environ={})
    path.write('not toml [')
    with pytest.raises(ConfigurationError):
        settings.load(str(path), environ={})


def test_check_bound():
    assert settings.check_bound('lyndon', 3) == settings.config.bounds.lyndon
    with pytest.raises(BoundExceededError):
        settings.check_bound('lyndon', 100)
    assert settings.check_bound('lyndon', 100, 100) == 100
