"""Jacobian certificates for the independence of Lyndon-pattern densities.

Let ``p1 >_L p2 >_L ... >_L p(N+1) = 1`` be the Lyndon permutations of
size at most ``k`` and ``ni = |pi|``. The family studied here is the
blow-up of ``p1 + ... + p(N+1)`` (direct sum) where the element ``j`` of
block ``i`` is scaled by ``s[i] * t[i,j]`` and the trailing ``1`` takes the
rest, ``z = 1 - sum s[i] t[i,j]``. No ``pi`` with ``i <= N`` ends with a
block of size one, so none of their densities ever uses the trailing part
and ``d(pi)`` is a polynomial in the ``s`` and ``t`` variables alone.

A point where the Jacobian of ``(d(p1), ..., d(pN))`` with respect to
``s[1..N]`` is invertible certifies that the densities are locally
independent.
"""
import functools
import itertools
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import Matrix, Rational

from . import settings
from .common import (InternalError, PreconditionError, UnsupportedError,
                     WitnessNotFoundError)
from .lyndon_alg import (enumerate_lyndon_permutations, is_lyndon_permutation,
                         lyndon_key)
from .perm_core import direct_sum, increasing_segments, pattern_at
from .permuton_model import (BlowupPermuton, density_gradient,
                             density_polynomial, matching_counts)
from .polynomial import PolynomialRing, Variable
from .util import fraction_str, multinomial, to_fraction

logger = logging.getLogger(__name__)


class PiLFamily:
    """Structure of the family for one ``k``: blocks, parts and scales."""

    def __init__(self, k):
        if k < 2:
            raise PreconditionError('k must be at least 2, got %d' % k)
        settings.check_bound('lyndon', k)
        self.k = k
        self.lyndon_list = tuple(
            enumerate_lyndon_permutations(k, include_trivial=True))
        self.perms = self.lyndon_list[:-1]
        self.N = len(self.perms)
        self.sizes = tuple(len(p) for p in self.perms)
        self.base = direct_sum(self.lyndon_list)
        # (i, j), 1-based, for every part except the trailing one
        self.parts = [(i, j) for i, n in enumerate(self.sizes, 1)
                      for j in range(1, n + 1)]
        self.s_vars = [Variable.s(i) for i in range(1, self.N + 1)]
        self.t_vars = [Variable.t(i, j) for i, j in self.parts]
        self.ring = PolynomialRing(self.s_vars + self.t_vars)

    def index(self, pi):
        try:
            return self.perms.index(pi) + 1
        except ValueError:
            raise PreconditionError(
                '%s is not a non-trivial Lyndon permutation of size <= %d'
                % (pi, self.k))

    def part_scales(self):
        """Scale polynomials of every part, the trailing ``z`` included."""
        ring = self.ring
        scales = [ring.gen(Variable.s(i)) * ring.gen(Variable.t(i, j))
                  for i, j in self.parts]
        return scales + [ring.one - sum(scales, ring.zero)]

    def check_z_free(self, pi):
        last = len(self.base) - 1
        for counts in matching_counts(pi, self.base):
            if counts[last]:
                raise InternalError('%s uses the trailing part of the '
                                    'family for k=%d' % (pi, self.k))


@functools.lru_cache(maxsize=None)
def pil_family(k):
    return PiLFamily(k)


@dataclass(frozen=True)
class PiLSpec:
    """A point of the family: ``s[1..N]`` and ``t[i, 1..ni]``."""

    k: int
    s_values: tuple
    t_values: tuple

    def __post_init__(self):
        family = pil_family(self.k)
        s = tuple(to_fraction(v) for v in self.s_values)
        t = tuple(tuple(to_fraction(v) for v in row)
                  for row in self.t_values)
        object.__setattr__(self, 's_values', s)
        object.__setattr__(self, 't_values', t)
        if len(s) != family.N or \
                tuple(len(row) for row in t) != family.sizes:
            raise PreconditionError(
                'k=%d needs %d s-values and t-rows of sizes %s'
                % (self.k, family.N, list(family.sizes)))
        if any(v <= 0 for v in s) or any(v <= 0 for row in t for v in row):
            raise PreconditionError('s and t values must be positive')
        if sum(s) >= 1 or any(sum(row) >= 1 for row in t):
            raise PreconditionError('s and every t-row must sum below 1')
        if self.z <= 0:
            raise PreconditionError('residual scale %s is not positive'
                                    % self.z)

    @property
    def lyndon_list(self):
        return pil_family(self.k).lyndon_list

    @property
    def z(self):
        return 1 - sum(si * tij for si, row in zip(self.s_values,
                                                   self.t_values)
                       for tij in row)

    def assignment(self):
        point = {Variable.s(i): v for i, v in enumerate(self.s_values, 1)}
        for i, row in enumerate(self.t_values, 1):
            for j, v in enumerate(row, 1):
                point[Variable.t(i, j)] = v
        return point

    @classmethod
    def from_assignment(cls, k, point):
        family = pil_family(k)
        names = {str(v): v for v in family.s_vars + family.t_vars}
        resolved = {}
        for key, value in point.items():
            key = names.get(key, key) if isinstance(key, str) else key
            resolved[key] = value
        try:
            s = [resolved[v] for v in family.s_vars]
            t = [[resolved[Variable.t(i, j)] for j in range(1, n + 1)]
                 for i, n in enumerate(family.sizes, 1)]
        except KeyError as e:
            raise PreconditionError('point misses variable %s' % e.args[0])
        return cls(k, tuple(s), tuple(tuple(row) for row in t))

    def to_json(self):
        return {str(v): fraction_str(x)
                for v, x in self.assignment().items()}


def load_point(path, k):
    """Read ``{"s[1]": "p/q", "t[1,1]": "p/q", ...}`` from a JSON file."""
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise PreconditionError('cannot read point %s: %s' % (path, e))
    if not isinstance(data, dict):
        raise PreconditionError('point file must hold a JSON object')
    return PiLSpec.from_assignment(k, data)


def uniform_point(k):
    """``s[i] = 1/(N+1)`` and ``t[i,j] = 1/(ni+1)``."""
    family = pil_family(k)
    return PiLSpec(k, tuple(Fraction(1, family.N + 1)
                            for _ in range(family.N)),
                   tuple(tuple(Fraction(1, n + 1) for _ in range(n))
                         for n in family.sizes))


def random_point(k, rng, max_denominator=None):
    """Random point with denominators ``max_denominator``.

    Numerators are drawn so that ``s`` and every ``t``-row sum below 1.
    """
    if max_denominator is None:
        max_denominator = settings.config.witness.max_denominator
    family = pil_family(k)
    d = max_denominator

    def draw(count):
        high = (d - 1) // count
        if high < 1:
            raise PreconditionError('denominator %d too small for %d values'
                                    % (d, count))
        return tuple(Fraction(int(v), d)
                     for v in rng.integers(1, high + 1, size=count))

    return PiLSpec(k, draw(family.N), tuple(draw(n) for n in family.sizes))


def build_PiL(spec):
    """The blow-up permuton of the family at ``spec``."""
    family = pil_family(spec.k)
    scales = [spec.s_values[i - 1] * spec.t_values[i - 1][j - 1]
              for i, j in family.parts]
    scales.append(spec.z)
    return BlowupPermuton(family.base, tuple(scales))


@functools.lru_cache(maxsize=None)
def _density_in_s_t(word, k):
    family = pil_family(k)
    pi = family.perms[[p.word for p in family.perms].index(word)]
    family.check_z_free(pi)
    poly = density_polynomial(pi, family.base, family.part_scales(),
                              max_size=len(pi))
    n = len(pi)
    if poly.degrees({'s'}) != {n} or poly.degrees({'t'}) != {n}:
        raise InternalError('d(%s) is not homogeneous of s- and t-degree %d'
                            % (pi, n))
    return poly


def density_in_s_t(pi, k):
    """``d(pi)`` on the family as a polynomial in ``s`` and ``t``."""
    pil_family(k).index(pi)
    return _density_in_s_t(pi.word, k)


def block_monomial_coefficient(i, k):
    """Coefficient of ``s[i]^ni t[i,1] ... t[i,ni]`` in ``d(pi)``.

    That monomial counts one point in every part of block ``i``.
    """
    family = pil_family(k)
    pi = family.perms[i - 1]
    monomial = {Variable.s(i): len(pi)}
    monomial.update({Variable.t(i, j): 1 for j in range(1, len(pi) + 1)})
    coeff = density_in_s_t(pi, k).coefficient(monomial)
    logger.info('coefficient of the block-%d monomial of d(%s): %s '
                '(segment formula gives %s)', i, pi, coeff,
                segment_formula(pi))
    if coeff == 0:
        raise InternalError('block-%d monomial of d(%s) vanishes' % (i, pi))
    return coeff


def segment_formula(pi):
    """``l1! ... lm! / n!`` over the increasing segments of ``pi``."""
    value = Fraction(1, math.factorial(len(pi)))
    for length in increasing_segments(pi):
        value *= math.factorial(length)
    return value


@functools.lru_cache(maxsize=None)
def symbolic_jacobian(k):
    """Matrix of polynomials ``d/ds[j] d(pi)``, for ``k <= 3``."""
    if k > 3:
        raise UnsupportedError('symbolic Jacobian only for k <= 3; use the '
                               'numeric mode for k=%d' % k)
    family = pil_family(k)
    rows = tuple(tuple(density_in_s_t(pi, k).diff(s) for s in family.s_vars)
                 for pi in family.perms)
    for j, s in enumerate(family.s_vars):
        if not any(row[j] for row in rows):
            raise InternalError('no density depends on %s' % s)
    return rows


def _numeric_jacobian(spec):
    family = pil_family(spec.k)
    P = build_PiL(spec)
    offsets = [0]
    for n in family.sizes:
        offsets.append(offsets[-1] + n)
    matrix = []
    for pi in family.perms:
        family.check_z_free(pi)
        grad = density_gradient(pi, P, max_size=len(pi))
        row = []
        for j, t_row in enumerate(spec.t_values):
            row.append(sum((t * grad[offsets[j] + p]
                            for p, t in enumerate(t_row)), Fraction(0)))
        matrix.append(tuple(row))
    return tuple(matrix)


def jacobian_matrix(k, point=None, mode='auto'):
    """Exact Jacobian ``d/ds[j] d(pi)`` at a point of the family.

    Args:
        point (PiLSpec): evaluation point, default :func:`uniform_point`
        mode (str): ``symbolic`` differentiates the density polynomials,
                    ``numeric`` uses exact gradients in the part scales and
                    the chain rule; ``auto`` picks symbolic for ``k <= 3``
    """
    if point is None:
        point = uniform_point(k)
    if point.k != k:
        raise PreconditionError('point is for k=%d, not %d' % (point.k, k))
    if mode == 'auto':
        mode = 'symbolic' if k <= 3 else 'numeric'
    if mode == 'symbolic':
        assignment = point.assignment()
        matrix = tuple(tuple(entry.evaluate(assignment) for entry in row)
                       for row in symbolic_jacobian(k))
    elif mode == 'numeric':
        matrix = _numeric_jacobian(point)
    else:
        raise PreconditionError('unknown Jacobian mode %r' % mode)
    for j in range(len(matrix)):
        if all(row[j] == 0 for row in matrix):
            raise InternalError('column %d of the Jacobian vanishes' % (j + 1))
    return matrix


def cofactor_determinant(matrix, one=1):
    """Determinant by expansion along the first row.

    Works for any entries supporting ``+``, ``-`` and ``*``.
    """
    n = len(matrix)
    if n == 0:
        return one
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * cofactor_determinant(minor, one)
        if total is None:
            total = term if j % 2 == 0 else -term
        elif j % 2:
            total = total - term
        else:
            total = total + term
    return total


def jacobian_determinant(matrix):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    matrix = [[to_fraction(v) for v in row] for row in matrix]
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise PreconditionError('matrix is not square')
    if n == 0:
        return Fraction(1)
    m = Matrix([[Rational(v.numerator, v.denominator) for v in row]
                for row in matrix])
    det = m.det(method='bareiss')
    det = Fraction(int(det.p), int(det.q))
    if n <= 4:
        check = Fraction(cofactor_determinant(matrix))
        if check != det:
            raise InternalError('determinants disagree: %s by elimination, '
                                '%s by cofactors' % (det, check))
    return det


def symbolic_determinant(k):
    """``det`` of the Jacobian as a polynomial; only ``k = 2``."""
    if k != 2:
        raise UnsupportedError('the full symbolic determinant is only '
                               'expanded for k=2')
    return cofactor_determinant(
        [list(row) for row in symbolic_jacobian(k)],
        one=pil_family(k).ring.one)


def _target_monomial(family):
    monomial = {s: n - 1 for s, n in zip(family.s_vars, family.sizes)}
    monomial.update({t: 1 for t in family.t_vars})
    return monomial


def truncated_determinant(matrix, bounds, one):
    """``det(matrix).truncate(bounds)`` without the full expansion.

    The determinant is expanded one row at a time over the sets of
    columns used so far, dropping every monomial with an exponent above
    ``bounds`` after each product.
    """
    rows = [[entry.truncate(bounds) for entry in row] for row in matrix]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise PreconditionError('determinant of a non-square matrix')
    partial = {frozenset(): one}
    for i in range(n):
        step = {}
        for used, poly in partial.items():
            for j in range(n):
                if j in used or not rows[i][j]:
                    continue
                term = (poly * rows[i][j]).truncate(bounds)
                if sum(1 for u in used if u > j) % 2:
                    term = -term
                key = used | {j}
                step[key] = step[key] + term if key in step else term
        partial = step
    return partial.get(frozenset(range(n)), one - one)


def det_monomial_coefficient(k):
    """Coefficient of ``prod s[i]^(ni-1) prod t[i,j]`` in the determinant."""
    if k not in (2, 3):
        raise UnsupportedError('monomial coefficient only for k in {2, 3}')
    family = pil_family(k)
    target = _target_monomial(family)
    det = truncated_determinant(symbolic_jacobian(k), target,
                                family.ring.one)
    coeff = det.coefficient(target)
    logger.info('coefficient of the target monomial in det for k=%d: %s',
                k, coeff)
    if coeff == 0:
        raise InternalError('target monomial of the determinant vanishes '
                            'for k=%d' % k)
    return coeff


@dataclass(frozen=True)
class JacobianCertificate:
    k: int
    point: PiLSpec
    matrix: tuple
    determinant: Fraction
    seed: int
    attempt: int = 0

    @property
    def lyndon_list(self):
        return self.point.lyndon_list

    def to_json(self):
        return {
            'k': self.k,
            'lyndon_list': [str(p) for p in self.lyndon_list],
            'point': self.point.to_json(),
            'matrix': [[fraction_str(v) for v in row] for row in self.matrix],
            'determinant': fraction_str(self.determinant),
            'seed': self.seed,
            'attempt': self.attempt,
        }


def find_witness(k, attempts=None, seed=0, mode='auto'):
    """Search random rational points for a non-zero Jacobian determinant."""
    if k not in (2, 3, 4):
        raise UnsupportedError('witness search only for k in {2, 3, 4}, '
                               'got %d' % k)
    if attempts is None:
        attempts = settings.config.witness.attempts
    rng = np.random.default_rng(seed)
    for attempt in range(attempts):
        point = random_point(k, rng)
        matrix = jacobian_matrix(k, point, mode=mode)
        det = jacobian_determinant(matrix)
        logger.info('k=%d attempt %d: det = %s', k, attempt, det)
        if det != 0:
            return JacobianCertificate(k, point, matrix, det, seed, attempt)
    raise WitnessNotFoundError('no point with non-zero determinant in %d '
                               'attempts (k=%d, seed=%d)'
                               % (attempts, k, seed))


def _float_density(counts_list, m, scales):
    return sum(multinomial(m, counts) *
               math.prod(z ** c for z, c in zip(scales, counts) if c)
               for counts in counts_list)


def numeric_jacobian(point, h=1e-5):
    """Float Jacobian from central differences of float densities.

    Shares no arithmetic with the exact path: part scales are floats and
    the derivatives are finite differences.
    """
    family = pil_family(point.k)
    s = [float(v) for v in point.s_values]
    t = [[float(v) for v in row] for row in point.t_values]
    counts = [matching_counts(pi, family.base) for pi in family.perms]

    def densities(s_values):
        scales = [s_values[i - 1] * t[i - 1][j - 1] for i, j in family.parts]
        scales.append(1.0 - sum(scales))
        return [_float_density(c, len(pi), scales)
                for c, pi in zip(counts, family.perms)]

    jac = np.zeros((family.N, family.N))
    for j in range(family.N):
        up, down = list(s), list(s)
        up[j] += h
        down[j] -= h
        jac[:, j] = (np.array(densities(up)) -
                     np.array(densities(down))) / (2 * h)
    return jac


def numeric_determinant(point, h=1e-5):
    """:func:`numpy.linalg.det` of :func:`numeric_jacobian`."""
    return float(np.linalg.det(numeric_jacobian(point, h)))


def recheck_certificate(certificate, tolerance=1e-6):
    """Compare the exact determinant with :func:`numeric_determinant`."""
    exact = float(certificate.determinant)
    numeric = numeric_determinant(certificate.point)
    error = abs(numeric - exact) / abs(exact)
    logger.info('float recheck: %.12g vs %.12g (relative error %.2e)',
                numeric, exact, error)
    if error > tolerance or (numeric > 0) != (exact > 0):
        raise InternalError('float determinant %.12g disagrees with %s'
                            % (numeric, certificate.determinant))
    return {'numeric_determinant': numeric, 'relative_error': error}


def _check_lyndon_tuple(perms, max_size):
    perms = list(perms)
    if not perms:
        raise PreconditionError('no permutations given')
    settings.check_bound('lemma_lyndon', sum(len(p) for p in perms),
                         max_size)
    for p in perms:
        if len(p) == 0 or not is_lyndon_permutation(p):
            raise PreconditionError('%s is not a Lyndon permutation' % p)
    for a, b in zip(perms, perms[1:]):
        if not lyndon_key(a) > lyndon_key(b):
            raise PreconditionError('%s is not >_L %s' % (a, b))
    return perms


def lemma_lyndon_solutions(perms, max_size=None):
    """Every ``(J1, ..., Jn)`` of disjoint position sets of the direct sum
    with ``Ji`` inducing ``perms[i]``."""
    perms = _check_lyndon_tuple(perms, max_size)
    whole = direct_sum(perms)
    solutions = []

    def search(i, free, chosen):
        if i == len(perms):
            solutions.append(tuple(chosen))
            return
        for subset in itertools.combinations(free, len(perms[i])):
            if pattern_at(whole, subset) == perms[i]:
                rest = [v for v in free if v not in subset]
                search(i + 1, rest, chosen + [subset])

    search(0, list(range(1, len(whole) + 1)), [])
    return solutions


def verify_lemma_lyndon(perms, max_size=None):
    """True iff the blocks themselves are the only solution."""
    perms = _check_lyndon_tuple(perms, max_size)
    expected, start = [], 1
    for p in perms:
        expected.append(tuple(range(start, start + len(p))))
        start += len(p)
    return lemma_lyndon_solutions(perms, max_size) == [tuple(expected)]
