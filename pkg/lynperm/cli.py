import argparse
import json
import logging
import sys
from fractions import Fraction

from . import commands as _commands  # noqa: F401  (registers subcommands)
from . import settings
from .common import LynpermError, argspec, commands
from .flag_calc import PermSum
from .lyndon_alg import BlockWord, WordSum
from .perm_core import Permutation
from .polynomial import RationalPolynomial
from .util import colored, ColoredFormatter, fraction_str

_TEXTUAL = (Permutation, BlockWord, PermSum, WordSum, RationalPolynomial)


def main(args=None):
    logger = logging.getLogger('lynperm')
    formatter = ColoredFormatter(
        '%(levelname)s %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    handler = logging.StreamHandler()
    handler.setFormatter(formatter)
    logger.addHandler(handler)
    try:
        return _run(logger, args)
    finally:
        logger.removeHandler(handler)


def _run(logger, args):
    main_parser = _ArgumentParser(
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        prog='lynperm', allow_abbrev=False,
        description='lynperm: Lyndon permutations, flag products and '
                    'pattern densities of blow-up permutons')

    main_parser.add_argument('-q', action='store_true', help='quiet')
    main_parser.add_argument('-v', action='store_true', help='verbose')
    main_parser.add_argument('--output', choices=['json', 'text'],
                             default=settings.config.cli.output,
                             help='output format')

    if args is None:
        args = sys.argv[1:]
    args = list(args)

    with_help = False
    if '-h' in args:
        args.remove('-h')
        with_help = True
    if '--help' in args:
        args.remove('--help')
        with_help = True

    args, remaining = main_parser.parse_known_args(args)

    if with_help:
        remaining.append('-h')

    # configure logging level
    if args.q:
        logger.setLevel(logging.WARNING)
    elif args.v:
        logger.setLevel(logging.DEBUG)
    else:
        logger.setLevel(logging.INFO)
    output = args.output

    subparsers = main_parser.add_subparsers(title='supported commands',
                                            dest='command')
    subparsers.required = True

    for cmd, f in commands.items():
        sub = subparsers.add_parser(
            cmd,
            help=getattr(f, '__help__', 'command ' + cmd),
            description=getattr(f, '__desc__', None),
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
            allow_abbrev=False)

        with ParserBuilder(sub) as builder:
            for arg in f.__funcspec__.pos:
                builder.add_opt(arg, argspec(arg, help='parameter ' + arg))
            if f.__funcspec__.varargs:
                name = f.__funcspec__.varargs
                builder.add_opt(name, argspec(name, nargs='+',
                                              help='parameters ' + name))
            for k, v in f.__funcspec__.kw:
                builder.add_opt(k, v)

        sub.set_defaults(func=_default_func(f))

    args = main_parser.parse_args(remaining)
    del args.q
    del args.v
    del args.output

    logger = logging.getLogger('lynperm.' + args.command)

    try:
        payload = args.func(args)
    except LynpermError as e:
        logger.error('%s: %s', e.__class__.__name__, e)
        if output == 'json':
            print(json.dumps({'error': {'type': e.__class__.__name__,
                                        'message': str(e)}}, indent=2))
        return 1
    except KeyboardInterrupt:
        logger.warning('cancelled by user')
        return 1

    if output == 'json':
        print(dumps(payload))
    else:
        print(render_text(payload))
    return 0


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        # customize error message
        self.print_usage(sys.stderr)
        err = colored('error:', 'r', style='b')
        self.exit(2, '%s %s\n' % (err, message))


class ParserBuilder:
    """Utility to generate CLI arguments from command signatures."""

    def __init__(self, parser):
        self._parser = parser
        self._names = []
        self._spec = []

    def add_opt(self, name, spec):
        """Add option with specification.

        Args:
            name (str) : option name
            spec (argspec): argument specification"""

        if spec.default() is True:
            # change name for better bool support
            spec._kwargs['dest'] = name  # pylint: disable=protected-access
            name = 'no_' + name
        self._names.append(name)
        self._spec.append(spec)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        seen = set(self._names) | {'h', 'q', 'v'}
        for name, spec in zip(self._names, self._spec):
            if name.startswith('_'):
                continue
            args, kwargs = spec.spec()
            if not args:
                args = ['--' + name.replace('_', '-')]
                kwargs.setdefault('dest', name)
                short = ''.join(seg[0] for seg in name.split('_'))
                if short not in seen:
                    args.append('-' + short)
                    seen.add(short)
            elif args[0].startswith('-'):
                kwargs['dest'] = name
            if 'help' not in kwargs:
                kwargs['help'] = 'parameter ' + name
            self._parser.add_argument(*args, **kwargs)


def _default_func(f):
    def run(args):
        kwargs = {name: value for (name, value) in args._get_kwargs()
                  if name not in ('command', 'func')}
        spec = f.__funcspec__
        pos = [kwargs.pop(name) for name in spec.pos]
        if spec.varargs:
            pos += kwargs.pop(spec.varargs)
        return f(*pos, **kwargs)
    return run


class _Encoder(json.JSONEncoder):
    def default(self, o):  # pylint: disable=method-hidden
        if isinstance(o, Fraction):
            return fraction_str(o)
        if hasattr(o, 'to_json'):
            return o.to_json()
        return super().default(o)


def dumps(payload):
    """Deterministic JSON with rationals as ``"p/q"`` strings."""
    return json.dumps(payload, indent=2, cls=_Encoder)


def _text(value):
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, Fraction):
        return '%s (~%.6g)' % (fraction_str(value), float(value))
    if isinstance(value, _TEXTUAL):
        return str(value)
    if hasattr(value, 'to_json'):
        return _text(value.to_json())
    return value


def render_text(payload, indent=0):
    """Readable rendering; rationals show a float approximation."""
    pad = '  ' * indent
    value = _text(payload)
    if isinstance(value, (dict, list)) and not value:
        return pad + json.dumps(value)
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            item = _text(item)
            if isinstance(item, (dict, list)) and item:
                lines.append('%s%s:' % (pad, key))
                lines.append(render_text(item, indent + 1))
            else:
                lines.append('%s%s: %s' % (pad, key, _scalar(item)))
        return '\n'.join(lines)
    if isinstance(value, list):
        lines = []
        for item in value:
            item = _text(item)
            if isinstance(item, (dict, list)) and item:
                lines.append('%s-' % pad)
                lines.append(render_text(item, indent + 1))
            else:
                lines.append('%s%s' % (pad, _scalar(item)))
        return '\n'.join(lines)
    return pad + _scalar(value)


def _scalar(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return str(value)
