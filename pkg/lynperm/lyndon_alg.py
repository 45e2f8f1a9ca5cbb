"""Words over the alphabet of indecomposable permutations.

Letters are ordered by size first and lexicographically within one size,
so the alphabet starts ``1 < 21 < 231 < 312 < 321 < 2341 < ...``. Words
compare lexicographically with a proper prefix being smaller.
"""
import functools
import itertools
import logging
import math
from dataclasses import dataclass

from . import settings
from .common import PreconditionError
from .perm_core import (decompose_blocks, direct_sum, enumerate_permutations,
                        is_indecomposable)
from .util import FormalSum

logger = logging.getLogger(__name__)


def alphabet_key(letter):
    return (len(letter), letter.word)


def reverse_alphabet_key(letter):
    """Alternative letter order: by size, then reverse-lexicographic."""
    return (len(letter), tuple(-v for v in letter.word))


def _cmp(a, b):
    return (a > b) - (a < b)


def alphabet_compare(a, b):
    """Compare two letters; returns -1, 0 or 1."""
    for letter in (a, b):
        if not is_indecomposable(letter):
            raise PreconditionError('%s is not indecomposable' % letter)
    return _cmp(alphabet_key(a), alphabet_key(b))


@functools.total_ordering
@dataclass(frozen=True)
class BlockWord:
    """A word whose letters are indecomposable permutations."""

    letters: tuple

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, 'letters', letters)
        for letter in letters:
            if len(letter) == 0 or not is_indecomposable(letter):
                raise PreconditionError(
                    'letter %s is not indecomposable' % letter)

    @classmethod
    def _trusted(cls, letters):
        obj = object.__new__(cls)
        object.__setattr__(obj, 'letters', tuple(letters))
        return obj

    @classmethod
    def parse(cls, text):
        """Parse the ``"21|231"`` form."""
        from .perm_core import parse_permutation
        return cls(parse_permutation(part) for part in text.split('|'))

    def key(self, letter_key=alphabet_key):
        return tuple(letter_key(letter) for letter in self.letters)

    def __lt__(self, other):
        return self.key() < other.key()

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BlockWord._trusted(self.letters[index])
        return self.letters[index]

    def __add__(self, other):
        return BlockWord._trusted(self.letters + other.letters)

    def to_permutation(self):
        return direct_sum(self.letters)

    def __str__(self):
        return '|'.join(str(letter) for letter in self.letters)

    def __repr__(self):
        return 'BlockWord(%r)' % str(self)

    def to_json(self):
        return str(self)


class WordSum(FormalSum):
    """Formal sum of block words with integer coefficients."""

    __slots__ = []

    def _ordered(self):
        return sorted(self.items(), key=lambda item: item[0], reverse=True)

    def __str__(self):
        return ' + '.join(('%d*%s' % (c, w)) if c != 1 else str(w)
                          for w, c in self._ordered())

    def to_json(self):
        return [[str(w), c] for w, c in self._ordered()]


def _require_word(w):
    if len(w) == 0:
        raise PreconditionError('the empty word is not allowed here')


def is_lyndon_word(w, letter_key=alphabet_key):
    """True iff ``w`` is strictly smaller than each of its proper suffixes."""
    _require_word(w)
    keys = w.key(letter_key)
    return all(keys[i:] > keys for i in range(1, len(keys)))


def cfl_factorize(w, letter_key=alphabet_key):
    """Chen-Fox-Lyndon factorization by Duval's algorithm.

    Returns the unique list of Lyndon words, lexicographically
    non-increasing, whose concatenation is ``w``.
    """
    _require_word(w)
    s = w.key(letter_key)
    n = len(s)
    factors = []
    i = 0
    while i < n:
        j, k = i + 1, i
        while j < n and s[k] <= s[j]:
            k = i if s[k] < s[j] else k + 1
            j += 1
        while i <= k:
            factors.append(w[i:i + j - k])
            i += j - k
    return factors


def block_word_of(p):
    return BlockWord._trusted(decompose_blocks(p).blocks)


def lyndon_key(p):
    """Sort key realizing the ``<_L`` order on permutations."""
    return block_word_of(p).key()


def compare_L(p, q):
    """Compare block words of ``p`` and ``q``; returns -1, 0 or 1."""
    return _cmp(lyndon_key(p), lyndon_key(q))


def is_lyndon_permutation(p, letter_key=alphabet_key):
    return is_lyndon_word(block_word_of(p), letter_key)


@functools.lru_cache(maxsize=None)
def _lyndon_permutations(k):
    found = [p for n in range(1, k + 1)
             for p in enumerate_permutations(n, max_size=n)
             if is_lyndon_permutation(p)]
    found.sort(key=lyndon_key, reverse=True)
    return tuple(found)


def enumerate_lyndon_permutations(k, include_trivial=False, max_size=None):
    """Lyndon permutations of size at most ``k`` in ``>_L`` order.

    The trivial permutation ``1`` is the ``<_L``-smallest Lyndon
    permutation; it closes the list when ``include_trivial`` is set.
    """
    if k < 1:
        raise PreconditionError('k must be positive, got %d' % k)
    settings.check_bound('lyndon', k, max_size)
    found = _lyndon_permutations(k)
    if include_trivial:
        return list(found)
    return [p for p in found if len(p) >= 2]


def lyndon_size_counts(k, letter_key=alphabet_key, max_size=None):
    """Number of Lyndon permutations of each size ``1..k`` under an order."""
    settings.check_bound('lyndon', k, max_size)
    return [sum(1 for p in enumerate_permutations(n, max_size=n)
                if is_lyndon_permutation(p, letter_key))
            for n in range(1, k + 1)]


def _factorials(kmax):
    return [1] + [math.factorial(n) for n in range(1, kmax + 1)]


def lyndon_counts_from_series(kmax, max_size=None):
    """Solve ``prod (1 - x^n)^(-l_n) = 1 + sum n! x^n`` for ``l_1..l_kmax``.

    Each ``l_m`` is fixed by the degree-``m`` coefficient, since the factor
    for ``n = m`` contributes ``l_m x^m`` plus terms of higher degree.
    """
    if kmax < 1:
        raise PreconditionError('kmax must be positive, got %d' % kmax)
    settings.check_bound('series', kmax, max_size)
    target = _factorials(kmax)
    product = [1] + [0] * kmax
    counts = []
    for m in range(1, kmax + 1):
        ell = target[m] - product[m]
        assert ell >= 0
        counts.append(ell)
        # multiply by (1 - x^m)^(-ell) = sum_j C(ell + j - 1, j) x^(mj)
        updated = [0] * (kmax + 1)
        for d, c in enumerate(product):
            if not c:
                continue
            for j in range(0, (kmax - d) // m + 1):
                updated[d + m * j] += c * math.comb(ell + j - 1, j)
        product = updated
    return counts


def indecomposable_counts(kmax):
    """Indecomposable permutations of each size ``1..kmax``.

    Every permutation is a sequence of indecomposable blocks, so
    ``1 + sum n! x^n = 1 / (1 - I(x))``.
    """
    if kmax < 1:
        raise PreconditionError('kmax must be positive, got %d' % kmax)
    target = _factorials(kmax)
    inverse = [1] + [0] * kmax
    for n in range(1, kmax + 1):
        inverse[n] = -sum(target[j] * inverse[n - j] for j in range(1, n + 1))
    return [-c for c in inverse[1:]]


def feasible_dimension(k, max_size=None):
    """Dimension of the feasible region of pattern densities of size <= k.

    Returns a dict with the dimension (non-trivial Lyndon permutations)
    and the weaker lower bound given by non-trivial indecomposable ones.
    """
    settings.check_bound('series', k, max_size)
    lyndon = lyndon_counts_from_series(k, max_size=k)
    indecomposable = indecomposable_counts(k)
    return {
        'k': k,
        'dimension': sum(lyndon[1:]),
        'indecomposable_bound': sum(indecomposable[1:]),
    }


def _shuffle_pair(u, v):
    n = len(u) + len(v)
    result = {}
    for positions in itertools.combinations(range(n), len(u)):
        chosen = set(positions)
        a, b = iter(u), iter(v)
        word = tuple(next(a) if i in chosen else next(b) for i in range(n))
        result[word] = result.get(word, 0) + 1
    return result


def shuffle_product(words):
    """Shuffle product ``w1 (x) w2 (x) ... (x) wn`` as a :class:`WordSum`."""
    words = list(words)
    if not words:
        raise PreconditionError('shuffle product of no words')
    for w in words:
        _require_word(w)
    acc = {words[0].letters: 1}
    for w in words[1:]:
        step = {}
        for u, c in acc.items():
            for x, d in _shuffle_pair(u, w.letters).items():
                step[x] = step.get(x, 0) + c * d
        acc = step
    return WordSum((BlockWord._trusted(u), c) for u, c in acc.items())


def max_shuffle_constituent(words):
    """Largest term of the shuffle product and its coefficient.

    The words must be Lyndon and lexicographically non-increasing; the
    largest term is then their concatenation.
    """
    words = list(words)
    if not words:
        raise PreconditionError('no words given')
    for w in words:
        if not is_lyndon_word(w):
            raise PreconditionError('%s is not a Lyndon word' % w)
    for u, v in zip(words, words[1:]):
        if u < v:
            raise PreconditionError(
                'words must be non-increasing, but %s < %s' % (u, v))
    product = shuffle_product(words)
    top = max(product)
    return top, product[top]
