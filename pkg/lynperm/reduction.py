"""Pattern densities as polynomials in Lyndon-pattern densities.

Every permutation ``p`` factors uniquely as ``p1 + ... + pn`` (direct sum)
with Lyndon ``p1 >=_L ... >=_L pn``. The flag product of the factors
contains ``p`` with a positive coefficient, and every other constituent
comes earlier in :func:`reduction_key` order. Since the density of the
product is the product of the densities, ``d(p)`` is solved for in terms
of ``d(p1) ... d(pn)`` and densities of earlier permutations. Induction
along that order gives a polynomial ``p_p`` in the densities of the
non-trivial Lyndon permutations, with ``d(1) = 1`` substituted.
"""
import logging
from fractions import Fraction

from . import settings
from .common import (InternalError, MissingDependencyError,
                     PreconditionError)
from .flag_calc import flag_product
from .lyndon_alg import (block_word_of, cfl_factorize,
                         enumerate_lyndon_permutations,
                         is_lyndon_permutation)
from .perm_core import enumerate_permutations
from .permuton_model import exact_density
from .polynomial import PolynomialRing, Variable

logger = logging.getLogger(__name__)


def reduction_key(p):
    """Order key: number of blocks, then block word."""
    word = block_word_of(p)
    return (len(word), word.key())


def reduction_order_compare(p, q):
    a, b = reduction_key(p), reduction_key(q)
    if a == b and p != q:
        raise InternalError('%s and %s share a block word' % (p, q))
    return (a > b) - (a < b)


def lyndon_factor_permutation(p):
    """Lyndon permutations ``p1 >=_L ... >=_L pn`` with direct sum ``p``."""
    return [factor.to_permutation()
            for factor in cfl_factorize(block_word_of(p))]


class ReductionTable:
    """Map from every permutation of size at most ``k`` to ``p_p``."""

    def __init__(self, k, ring):
        self.k = k
        self.ring = ring
        self.entries = {}

    def __getitem__(self, p):
        return self.entries[p]

    def __contains__(self, p):
        return p in self.entries

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def variable(self, p):
        """``x[p]`` as a polynomial, with ``x[1]`` read as the constant 1."""
        if len(p) == 1:
            return self.ring.one
        return self.ring.gen(Variable.x(p))

    def lyndon_assignment(self, P, max_size=None):
        """``x[s] -> d(s, P)`` for every variable of the table."""
        return {v: exact_density(v.index[0], P, max_size=max_size)
                for v in self.ring.variables}

    def apply(self, assignment):
        """Evaluate every entry at the given Lyndon densities."""
        return {p: poly.evaluate(assignment)
                for p, poly in self.entries.items()}

    def evaluate(self, P, max_size=None):
        """The densities of every permutation in the table, through ``P``'s
        Lyndon densities."""
        return self.apply(self.lyndon_assignment(P, max_size=max_size))

    def to_json(self):
        return {str(p): poly.to_json() for p, poly in self.entries.items()}


def _table_ring(k, max_size=None):
    lyndon = enumerate_lyndon_permutations(k, max_size=max_size)
    return PolynomialRing(Variable.x(p) for p in lyndon)


def reduce_to_lyndon(p, table):
    """Polynomial ``p_p`` from the entries of permutations before ``p``."""
    if len(p) == 0:
        raise PreconditionError('the empty permutation is not a pattern')
    if is_lyndon_permutation(p):
        return table.variable(p)

    factors = lyndon_factor_permutation(p)
    product = flag_product(factors, max_size=len(p))
    lead = product.get(p, Fraction(0))
    if lead <= 0:
        raise InternalError('%s has coefficient %s in the product of its '
                            'Lyndon factors' % (p, lead))

    poly = table.ring.one
    for factor in factors:
        poly = poly * table.variable(factor)
    for sigma, c in product.items():
        if sigma == p:
            continue
        if sigma not in table:
            raise MissingDependencyError('%s needs the entry for %s first'
                                         % (p, sigma))
        poly = poly - table[sigma] * c
    logger.debug('%s = (%s) / %s', p,
                 ' x '.join(map(str, factors)), lead)
    return poly / lead


def build_reduction_table(k, max_size=None):
    """Reduction polynomials for every permutation of size at most ``k``."""
    if k < 1:
        raise PreconditionError('k must be positive, got %d' % k)
    settings.check_bound('reduction', k, max_size)
    table = ReductionTable(k, _table_ring(k, max_size=k))
    for n in range(1, k + 1):
        perms = sorted(enumerate_permutations(n, max_size=n),
                       key=reduction_key)
        for p in perms:
            table.entries[p] = reduce_to_lyndon(p, table)
        logger.info('reduced %d permutations of size %d', len(perms), n)
    return table


def evaluate_polynomial(poly, assignment):
    """Exact value of ``poly``; ``assignment`` maps variables to rationals.

    Keys may be :class:`~lynperm.polynomial.Variable` objects or their
    names such as ``"x[21]"``.
    """
    names = {str(v): v for v in poly.ring.variables}
    resolved = {}
    for key, value in assignment.items():
        if isinstance(key, str):
            if key not in names:
                continue
            key = names[key]
        resolved[key] = value
    return poly.evaluate(resolved)
