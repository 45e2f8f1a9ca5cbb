"""Permutations, direct sums, indecomposable blocks and pattern densities.

Permutations are written in one-line notation with values ``1..n``;
positions passed to :func:`pattern_at` are 1-based as well.
"""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import settings
from .common import InvalidPermutationError, PreconditionError


@dataclass(frozen=True)
class Permutation:
    """A permutation ``word[0] word[1] ... word[n-1]`` of ``1..n``."""

    word: tuple

    def __post_init__(self):
        word = tuple(self.word)
        object.__setattr__(self, 'word', word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise InvalidPermutationError(
                'not a permutation of 1..%d: %r' % (len(word), word))

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __getitem__(self, index):
        return self.word[index]

    def inverse(self):
        inv = [0] * len(self.word)
        for position, value in enumerate(self.word, 1):
            inv[value - 1] = position
        return Permutation(inv)

    def __str__(self):
        if len(self.word) <= 9:
            return ''.join(str(v) for v in self.word)
        return ','.join(str(v) for v in self.word)

    def __repr__(self):
        return 'Permutation(%r)' % str(self)

    def to_json(self):
        return str(self)


EMPTY = Permutation(())


@dataclass(frozen=True)
class BlockDecomposition:
    """Maximal direct-sum decomposition into indecomposable blocks."""

    blocks: tuple

    def __len__(self):
        return len(self.blocks)

    def intervals(self):
        """1-based ``range`` of positions occupied by each block."""
        start = 1
        result = []
        for block in self.blocks:
            result.append(range(start, start + len(block)))
            start += len(block)
        return result


def standardize(values):
    """Pattern (as a word) of a sequence of distinct comparable values."""
    rank = {v: i for i, v in enumerate(sorted(values), 1)}
    return tuple(rank[v] for v in values)


def parse_permutation(text):
    """Parse ``"21453"`` or ``"10,2,3,4,5,6,7,8,9,1"``."""
    text = text.strip()
    if not text:
        raise InvalidPermutationError('empty permutation')
    try:
        if ',' in text:
            word = [int(v) for v in text.split(',')]
        else:
            if not text.isdigit():
                raise ValueError(text)
            word = [int(c) for c in text]
    except ValueError:
        raise InvalidPermutationError('cannot parse permutation %r' % text)
    return Permutation(word)


def direct_sum(parts):
    """Block-diagonal stacking; later parts are shifted above earlier ones."""
    word = []
    for part in parts:
        shift = len(word)
        word.extend(v + shift for v in part)
    return Permutation(word)


def _require_nonempty(p):
    if len(p) == 0:
        raise PreconditionError('the empty permutation is not allowed here')


def decompose_blocks(p):
    _require_nonempty(p)
    blocks = []
    start = 0
    high = 0
    for i, v in enumerate(p.word):
        high = max(high, v)
        if high == i + 1:
            blocks.append(Permutation(w - start for w in p.word[start:i + 1]))
            start = i + 1
    return BlockDecomposition(tuple(blocks))


def is_indecomposable(p):
    _require_nonempty(p)
    high = 0
    for i, v in enumerate(p.word[:-1]):
        high = max(high, v)
        if high == i + 1:
            return False
    return True


def increasing_segments(p):
    """Lengths of the maximal runs with ``p(a+1) = p(a) + 1``."""
    _require_nonempty(p)
    lengths = [1]
    for a, b in zip(p.word, p.word[1:]):
        if b == a + 1:
            lengths[-1] += 1
        else:
            lengths.append(1)
    return lengths


def pattern_at(p, indices):
    """Pattern induced by the 1-based positions ``indices`` of ``p``."""
    indices = list(indices)
    if not indices:
        raise PreconditionError('no positions given')
    for i, j in zip(indices, indices[1:]):
        if j <= i:
            raise PreconditionError(
                'positions must be strictly increasing: %r' % indices)
    if indices[0] < 1 or indices[-1] > len(p):
        raise PreconditionError(
            'positions %r out of range 1..%d' % (indices, len(p)))
    return Permutation(standardize([p.word[i - 1] for i in indices]))


def pattern_density(sigma, p):
    """Exact density of ``sigma`` in ``p`` by scanning every subset."""
    _require_nonempty(sigma)
    m, n = len(sigma), len(p)
    if m > n:
        raise PreconditionError(
            'pattern %s is longer than permutation %s' % (sigma, p))
    hits = sum(1 for values in itertools.combinations(p.word, m)
               if standardize(values) == sigma.word)
    return Fraction(hits, math.comb(n, m))


def enumerate_permutations(n, max_size=None):
    """All permutations of size ``n`` in lexicographic order."""
    if n < 1:
        raise PreconditionError('size must be positive, got %d' % n)
    settings.check_bound('permutations', n, max_size)
    return [Permutation(w)
            for w in itertools.permutations(range(1, n + 1))]
