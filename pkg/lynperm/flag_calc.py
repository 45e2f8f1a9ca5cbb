"""Flag products of permutations.

For patterns ``p1, ..., pn`` of sizes ``k1, ..., kn`` the product is the
formal sum over permutations ``s`` of size ``K = k1 + ... + kn`` whose
coefficient is the number of ordered partitions of the positions of ``s``
into sets inducing ``p1, ..., pn``, divided by ``K! / (k1! ... kn!)``.
The density of the product in any permuton equals the product of the
densities of the factors.
"""
import functools
import itertools
import logging
import math
from fractions import Fraction

from . import settings
from .common import PreconditionError
from .perm_core import Permutation
from .permuton_model import exact_density
from .util import FormalSum, multinomial

logger = logging.getLogger(__name__)


class PermSum(FormalSum):
    """Formal sum of permutations with rational coefficients."""

    __slots__ = []

    def _ordered(self):
        return sorted(self.items(), key=lambda item: (len(item[0]),
                                                      item[0].word))

    def size(self):
        sizes = {len(p) for p in self}
        if len(sizes) > 1:
            raise PreconditionError('mixed sizes in %s' % self)
        return sizes.pop() if sizes else 0

    def __str__(self):
        out = []
        for p, c in self._ordered():
            c = Fraction(c)
            term = str(p) if abs(c) == 1 else '%s*%s' % (abs(c), p)
            if not out:
                out.append('-' + term if c < 0 else term)
            else:
                out.append(('- ' if c < 0 else '+ ') + term)
        return ' '.join(out) if out else '0'

    def to_json(self):
        return [[str(p), Fraction(c)] for p, c in self._ordered()]


def _check_parts(parts, max_size):
    parts = list(parts)
    if not parts:
        raise PreconditionError('flag product of no permutations')
    for p in parts:
        if len(p) == 0:
            raise PreconditionError('the empty permutation is not a pattern')
    settings.check_bound('flag_product', sum(len(p) for p in parts),
                         max_size)
    return parts


def _place(positions, values, pattern, word):
    for position, rank in zip(positions, pattern):
        word[position] = values[rank - 1]


@functools.lru_cache(maxsize=4096)
def _flag_pair(a, b):
    """Counts of ``(positions, values)`` placements of ``a`` and ``b``."""
    total = len(a) + len(b)
    everything = range(total)
    counts = {}
    for positions in itertools.combinations(everything, len(a)):
        rest = [i for i in everything if i not in positions]
        for values in itertools.combinations(range(1, total + 1), len(a)):
            others = [v for v in range(1, total + 1) if v not in values]
            word = [0] * total
            _place(positions, values, a, word)
            _place(rest, others, b, word)
            key = tuple(word)
            counts[key] = counts.get(key, 0) + 1
    return counts


def flag_product(parts, max_size=None):
    """Flag product ``parts[0] x parts[1] x ...`` as a :class:`PermSum`.

    Computed as an iterated binary product.
    """
    parts = _check_parts(parts, max_size)
    acc = {parts[0].word: Fraction(1)}
    size = len(parts[0])
    for p in parts[1:]:
        norm = math.comb(size + len(p), len(p))
        step = {}
        for word, c in acc.items():
            for product, count in _flag_pair(word, p.word).items():
                step[product] = step.get(product, 0) + c * Fraction(count,
                                                                    norm)
        acc = step
        size += len(p)
    return PermSum((Permutation(w), c) for w, c in acc.items())


def _ordered_partitions(items, sizes):
    if not sizes:
        yield ()
        return
    for first in itertools.combinations(items, sizes[0]):
        rest = [i for i in items if i not in first]
        for tail in _ordered_partitions(rest, sizes[1:]):
            yield (first,) + tail


def flag_product_by_partitions(parts, max_size=None):
    """The n-ary flag product straight from ordered set partitions."""
    parts = _check_parts(parts, max_size)
    sizes = [len(p) for p in parts]
    total = sum(sizes)
    counts = {}
    values_list = list(_ordered_partitions(list(range(1, total + 1)), sizes))
    for positions in _ordered_partitions(list(range(total)), sizes):
        for values in values_list:
            word = [0] * total
            for pos, vals, p in zip(positions, values, parts):
                _place(pos, vals, p.word, word)
            key = tuple(word)
            counts[key] = counts.get(key, 0) + 1
    norm = multinomial(total, sizes)
    return PermSum((Permutation(w), Fraction(c, norm))
                   for w, c in counts.items())


def constituents_violating_flag_lemma(pi, max_size=None):
    """Constituents of the product of ``pi``'s Lyndon factors not below it.

    A constituent other than ``pi`` must have fewer blocks than ``pi``, or
    as many blocks and a lexicographically smaller block word. The result
    lists every constituent breaking that rule, so it is always empty.
    """
    from .reduction import lyndon_factor_permutation, reduction_key

    factors = lyndon_factor_permutation(pi)
    product = flag_product(factors, max_size=max_size)
    bound = reduction_key(pi)
    violating = [sigma for sigma in product
                 if sigma != pi and not reduction_key(sigma) < bound]
    if violating:
        logger.error('constituents of %s not below it: %s', pi,
                     ', '.join(map(str, violating)))
    return sorted(violating, key=lambda p: p.word)


def density_of_sum(s, P, max_size=None):
    """``sum c * d(sigma, P)`` over the terms of ``s``."""
    s.size()  # raises on mixed sizes
    return sum((Fraction(c) * exact_density(sigma, P, max_size=max_size)
                for sigma, c in s.items()), Fraction(0))
