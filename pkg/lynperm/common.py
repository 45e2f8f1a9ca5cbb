import functools
import inspect as ins
import logging

from .util import Configuration

commands = dict()


class argspec:
    """In control of the behavior of commands. Replicates arguments for
    :meth:`argparse.ArgumentParser.add_argument`."""

    __slots__ = ['_args', '_kwargs', '_params']

    def __init__(self, *args, **kwargs):
        self._args = args
        self._kwargs = kwargs
        self._params = None

    def default(self):
        return self._kwargs.get('default')

    def spec(self):
        return self._args, dict(self._kwargs)

    @classmethod
    def from_param(cls, param):
        kwargs = dict()

        if isinstance(param, tuple):
            assert len(param) == 2 or len(param) == 3, \
                'should be default, help[, choices]'
            kwargs['default'] = param[0]
            kwargs['help'] = param[1]
            if len(param) == 3:
                kwargs['choices'] = param[2]
        else:
            kwargs['default'] = param

        if isinstance(kwargs['default'], list):
            if kwargs['default']:
                kwargs['nargs'] = '+'
                kwargs['type'] = type(kwargs['default'][0])
            else:
                kwargs['nargs'] = '*'
        elif isinstance(kwargs['default'], bool):
            if kwargs['default']:
                kwargs['action'] = 'store_false'
            else:
                kwargs['action'] = 'store_true'
        elif kwargs['default'] is not None:
            kwargs['type'] = type(kwargs['default'])

        obj = cls(**kwargs)
        obj._params = param  # pylint: disable=protected-access
        return obj


class funcspec:
    """Utility to generate argument specification from function signature.

    Positional parameters become positional arguments, ``*args`` becomes a
    positional argument taking one or more values, and parameters with
    defaults (plain or keyword-only) become ``--name`` options.
    """

    __slots__ = ['pos', 'varargs', 'kw']

    def __init__(self, f):
        spec = ins.getfullargspec(f)
        self.varargs = spec.varargs
        defaults = spec.defaults or ()
        n_config = len(defaults)
        self.pos = spec.args[:len(spec.args) - n_config]
        self.kw = [(name, _as_argspec(v)) for name, v in
                   zip(spec.args[len(spec.args) - n_config:], defaults)]
        if spec.kwonlydefaults:
            self.kw += [(name, _as_argspec(spec.kwonlydefaults[name]))
                        for name in spec.kwonlyargs]

    def get_call_args(self, *args, **kwargs):
        defaults = dict((k, v.default()) for k, v in self.kw)
        defaults.update(kwargs)
        named = list(zip(self.pos, args))
        extra = list(args[len(self.pos):])
        if self.varargs and extra:
            named.append((self.varargs, extra))
        return named + list(defaults.items())


def _as_argspec(value):
    return value if isinstance(value, argspec) else argspec.from_param(value)


def command(wraps=None, help=None, description=None, operations=()):
    """Function decorator that would turn a function into a lynperm command.

    Args:
        help (str): one-line help shown in the command list
        description (str): longer description for ``lynperm CMD -h``
        operations (tuple): names of the library operations this command
                            exposes
    """
    def wrapper(f):
        if not ins.isfunction(f):
            raise TypeError('only function can form command')
        name = f.__name__.replace('_', '-')
        if name in commands:
            raise DuplicationError('command %s already registered' % name)

        spec = funcspec(f)
        signature = ins.signature(f)
        logger = logging.getLogger('lynperm.' + name)

        @functools.wraps(f)
        def new_f(*args, **kwargs):
            # options left out of a direct call take their argspec default
            bound = signature.bind_partial(*args, **kwargs).arguments
            for k, v in spec.kw:
                if k not in bound:
                    kwargs[k] = v.default()
            new_f.config = Configuration(spec.get_call_args(*args, **kwargs))
            logger.debug('running with: %s', new_f.config)
            return f(*args, **kwargs)

        setattr(new_f, '__funcspec__', spec)
        setattr(new_f, '__operations__', tuple(operations))
        if help is not None:
            setattr(new_f, '__help__', help)
        if description is not None:
            setattr(new_f, '__desc__', description)

        commands[name] = new_f
        return new_f

    if wraps is None:
        return wrapper
    else:
        return wrapper(wraps)


class LynpermError(Exception):
    """Domain error; reported by the CLI with exit code 1."""


class InvalidPermutationError(LynpermError, ValueError):
    pass


class PreconditionError(LynpermError, ValueError):
    pass


class BoundExceededError(LynpermError):
    pass


class InvalidPermutonError(LynpermError, ValueError):
    pass


class UnassignedVariableError(LynpermError, KeyError):
    pass


class MissingDependencyError(LynpermError):
    pass


class WitnessNotFoundError(LynpermError):
    pass


class UnsupportedError(LynpermError):
    pass


class VerificationError(LynpermError):
    pass


class ConfigurationError(LynpermError):
    pass


class InternalError(LynpermError):
    """An invariant the mathematics guarantees was found broken."""


class DuplicationError(Exception):
    pass
