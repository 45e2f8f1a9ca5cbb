"""Exact multivariate polynomials over the rationals.

A thin layer over :mod:`sympy`'s sparse ``PolyRing`` with ``QQ``
coefficients. Variables are typed tags (``x[21]``, ``s[1]``, ``t[1,2]``,
``z[3]``) so that rendering and monomial order are stable across runs.
"""
from dataclasses import dataclass
from fractions import Fraction

from sympy import QQ, Symbol
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .common import PreconditionError, UnassignedVariableError
from .util import fraction_str, to_fraction

_KIND_ORDER = {'s': 0, 't': 1, 'x': 2, 'z': 3}


@dataclass(frozen=True)
class Variable:
    kind: str
    index: tuple

    @classmethod
    def x(cls, perm):
        return cls('x', (perm,))

    @classmethod
    def s(cls, i):
        return cls('s', (i,))

    @classmethod
    def t(cls, i, j):
        return cls('t', (i, j))

    @classmethod
    def z(cls, i):
        return cls('z', (i,))

    def sort_key(self):
        if self.kind == 'x':
            perm = self.index[0]
            return (_KIND_ORDER['x'], (len(perm), perm.word))
        return (_KIND_ORDER[self.kind], self.index)

    def __str__(self):
        return '%s[%s]' % (self.kind, ','.join(str(i) for i in self.index))

    def __repr__(self):
        return 'Variable(%s)' % self


def _qq(value):
    value = to_fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(coeff):
    return Fraction(int(coeff.numerator), int(coeff.denominator))


class PolynomialRing:
    """Ring ``QQ[v1, ..., vn]`` over a fixed, ordered set of variables."""

    def __init__(self, variables):
        self.variables = tuple(sorted(set(variables),
                                      key=Variable.sort_key))
        self._index = {v: i for i, v in enumerate(self.variables)}
        self._ring = PolyRing([Symbol(str(v)) for v in self.variables],
                              QQ, grlex)

    def __contains__(self, variable):
        return variable in self._index

    def __eq__(self, other):
        return self is other or (isinstance(other, PolynomialRing)
                                 and self.variables == other.variables)

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return 'PolynomialRing(%s)' % ', '.join(map(str, self.variables))

    def gen(self, variable):
        try:
            return RationalPolynomial(
                self, self._ring.gens[self._index[variable]])
        except KeyError:
            raise PreconditionError('%s is not a variable of %r'
                                    % (variable, self))

    def constant(self, value):
        return RationalPolynomial(self, self._ring.ground_new(_qq(value)))

    @property
    def one(self):
        return self.constant(1)

    @property
    def zero(self):
        return self.constant(0)


class RationalPolynomial:
    """Polynomial with :class:`fractions.Fraction` coefficients.

    Supports ``+``, ``-``, ``*`` and integer powers with other polynomials
    of the same ring and with rational constants; division only by a
    non-zero constant.
    """

    __slots__ = ['ring', '_poly']

    def __init__(self, ring, poly):
        self.ring = ring
        self._poly = poly

    def _coerce(self, other):
        if isinstance(other, RationalPolynomial):
            if other.ring != self.ring:
                raise PreconditionError(
                    'polynomials over different rings: %r and %r'
                    % (self.ring, other.ring))
            return other._poly
        return self.ring._ring.ground_new(_qq(other))

    def _new(self, poly):
        return RationalPolynomial(self.ring, poly)

    def __add__(self, other):
        return self._new(self._poly + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self._poly - self._coerce(other))

    def __rsub__(self, other):
        return self._new(self._coerce(other) - self._poly)

    def __mul__(self, other):
        return self._new(self._poly * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self._poly)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise PreconditionError('bad exponent %r' % (exponent,))
        return self._new(self._poly ** exponent)

    def __truediv__(self, other):
        other = to_fraction(other)
        if other == 0:
            raise ZeroDivisionError('polynomial division by zero')
        return self * (1 / other)

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.ring == other.ring and self._poly == other._poly
        try:
            return self._poly == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self._poly)

    def _monomial(self, exponents):
        return {v: e for v, e in zip(self.ring.variables, exponents) if e}

    @staticmethod
    def _monomial_key(exponents):
        return (sum(exponents),
                tuple((i, -e) for i, e in enumerate(exponents) if e))

    def terms(self):
        """``(monomial, coefficient)`` pairs in canonical order.

        Monomials are dicts from :class:`Variable` to exponent; the
        constant term (empty monomial) comes first, then by degree.
        """
        items = sorted(self._poly.items(),
                       key=lambda item: self._monomial_key(item[0]))
        return [(self._monomial(m), _fraction(c)) for m, c in items]

    def variables(self):
        """Variables that occur with non-zero exponent."""
        used = set()
        for exponents in self._poly.keys():
            used.update(v for v, e in zip(self.ring.variables, exponents)
                        if e)
        return sorted(used, key=Variable.sort_key)

    def coefficient(self, monomial):
        """Coefficient of ``monomial`` (a dict ``Variable -> exponent``)."""
        exponents = [0] * len(self.ring.variables)
        for v, e in monomial.items():
            if v not in self.ring:
                return Fraction(0)
            exponents[self.ring._index[v]] = e
        return _fraction(self._poly.get(tuple(exponents),
                                        self.ring._ring.domain.zero))

    def diff(self, variable):
        if variable not in self.ring:
            return self.ring.zero
        return self._new(self._poly.diff(
            self.ring._ring.gens[self.ring._index[variable]]))

    def degree(self, kinds=None):
        """Largest total degree, optionally counting only some kinds."""
        if not self._poly:
            return -1
        mask = [kinds is None or v.kind in kinds for v in self.ring.variables]
        return max(sum(e for e, keep in zip(m, mask) if keep)
                   for m in self._poly.keys())

    def degrees(self, kinds=None):
        """Set of per-monomial degrees, optionally counting only some kinds."""
        mask = [kinds is None or v.kind in kinds for v in self.ring.variables]
        return {sum(e for e, keep in zip(m, mask) if keep)
                for m in self._poly.keys()}

    def truncate(self, bounds):
        """Drop every monomial with an exponent over ``bounds[variable]``.

        Variables missing from ``bounds`` are unbounded.
        """
        limits = [bounds.get(v) for v in self.ring.variables]
        kept = {m: c for m, c in self._poly.items()
                if all(b is None or e <= b for e, b in zip(m, limits))}
        return self._new(self.ring._ring.from_dict(kept))

    def evaluate(self, assignment):
        """Exact value at ``assignment`` (``Variable -> rational``)."""
        values = [assignment.get(v) for v in self.ring.variables]
        values = [None if value is None else to_fraction(value)
                  for value in values]
        total = Fraction(0)
        for exponents, coeff in self._poly.items():
            term = _fraction(coeff)
            for v, e, value in zip(self.ring.variables, exponents, values):
                if not e:
                    continue
                if value is None:
                    raise UnassignedVariableError(
                        'variable %s is not assigned' % v)
                term *= value ** e
            total += term
        return total

    def __str__(self):
        parts = []
        for monomial, coeff in self.terms():
            factors = ['%s^%d' % (v, e) if e > 1 else str(v)
                       for v, e in sorted(monomial.items(),
                                          key=lambda item: item[0].sort_key())]
            magnitude = abs(coeff)
            if not factors:
                body = _rational_str(magnitude)
            elif magnitude == 1:
                body = '*'.join(factors)
            else:
                body = '*'.join([_rational_str(magnitude)] + factors)
            if not parts:
                parts.append('-' + body if coeff < 0 else body)
            else:
                parts.append(('- ' if coeff < 0 else '+ ') + body)
        return ' '.join(parts) if parts else '0'

    def __repr__(self):
        return 'RationalPolynomial(%r)' % str(self)

    def to_json(self):
        return [{
            'monomial': ['%s^%d' % (v, e) for v, e in
                         sorted(monomial.items(),
                                key=lambda item: item[0].sort_key())],
            'coeff': fraction_str(coeff),
        } for monomial, coeff in self.terms()]


def _rational_str(value):
    if value.denominator == 1:
        return str(value.numerator)
    return '%d/%d' % (value.numerator, value.denominator)
