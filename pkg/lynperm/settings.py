"""Runtime configuration.

Settings come from built-in defaults, then the first ``lynperm.toml`` found
from the working directory upward (or the file named by ``LYNPERM_CONFIG``),
then the ``LYNPERM_MAX_SIZE`` environment override for every size bound.
"""
import copy
import os
import pathlib

import toml

from .common import BoundExceededError, ConfigurationError
from .util import Configuration

DEFAULTS = {
    'bounds': {
        'permutations': 8,
        'lyndon': 7,
        'flag_product': 8,
        'density': 6,
        'reduction': 5,
        'series': 12,
        'lemma_lyndon': 8,
    },
    'cli': {
        'output': 'json',
        'seed': 0,
    },
    'sampling': {
        'chunk_size': 4096,
    },
    'witness': {
        'max_denominator': 64,
        'attempts': 20,
    },
}


def find_config(start=None):
    """Return the nearest ``lynperm.toml`` at or above ``start``, if any."""
    p = pathlib.Path(start or '.').absolute()
    while True:
        if p.joinpath('lynperm.toml').exists():
            return p / 'lynperm.toml'
        if p == p.parent:
            return None
        p = p.parent


def load(path=None, environ=None):
    """Build the settings object.

    Args:
        path (str or pathlib.Path): explicit TOML file; searched for when
                                    omitted
        environ (dict): environment to read overrides from (default
                        ``os.environ``)
    """
    if environ is None:
        environ = os.environ
    cfg = copy.deepcopy(DEFAULTS)

    if path is None:
        path = environ.get('LYNPERM_CONFIG') or find_config()
    if path is not None:
        try:
            loaded = toml.load(str(path))
        except (OSError, toml.TomlDecodeError) as e:
            raise ConfigurationError('cannot read %s: %s' % (path, e))
        for section, values in loaded.items():
            if not isinstance(values, dict) or section not in cfg:
                raise ConfigurationError('unknown section [%s]' % section)
            cfg[section].update(values)

    max_size = environ.get('LYNPERM_MAX_SIZE')
    if max_size is not None:
        try:
            max_size = int(max_size)
        except ValueError:
            raise ConfigurationError(
                'LYNPERM_MAX_SIZE must be an integer, got %r' % max_size)
        for name in cfg['bounds']:
            cfg['bounds'][name] = max_size

    return Configuration(cfg)


config = load()


def check_bound(name, value, override=None):
    """Raise :class:`BoundExceededError` if ``value`` is over a size bound.

    Args:
        name (str): key in the ``[bounds]`` section
        value (int): requested size
        override (int): explicit bound replacing the configured one
    """
    limit = override if override is not None else config.bounds[name]
    if value > limit:
        raise BoundExceededError(
            '%s size %d exceeds the bound %d (raise it with '
            'LYNPERM_MAX_SIZE or [bounds] %s in lynperm.toml)'
            % (name, value, limit, name))
    return limit
