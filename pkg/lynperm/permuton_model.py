"""Blow-up permutons.

The blow-up of a base permutation ``b`` of size ``k`` with scales
``z1, ..., zk`` places an increasing diagonal segment of length ``zi`` for
every element of ``b``: segments occupy consecutive x-intervals in the
order of positions and consecutive y-intervals in the order of values.

A random point lands in part ``i`` with probability ``zi`` and points in
one part are increasing, so the pattern of ``m`` random points only
depends on how many land in each part. Exact densities therefore reduce
to a sum over count vectors, each weighted by a multinomial.
"""
import functools
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import settings
from .common import InvalidPermutonError, PreconditionError
from .perm_core import Permutation, parse_permutation, standardize
from .polynomial import PolynomialRing, Variable
from .util import fraction_str, multinomial, to_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlowupPermuton:
    base: Permutation
    scales: tuple

    def __post_init__(self):
        try:
            scales = tuple(to_fraction(z) for z in self.scales)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise InvalidPermutonError('bad scale factor: %s' % e)
        object.__setattr__(self, 'scales', scales)
        if len(self.base) == 0:
            raise InvalidPermutonError('empty base permutation')
        if len(scales) != len(self.base):
            raise InvalidPermutonError(
                '%d scales given for a base of size %d'
                % (len(scales), len(self.base)))
        if any(z < 0 for z in scales):
            raise InvalidPermutonError('negative scale factor in %s'
                                       % ', '.join(map(str, scales)))
        if sum(scales) != 1:
            raise InvalidPermutonError('scales sum to %s, not 1'
                                       % sum(scales))

    def __len__(self):
        return len(self.base)

    def x_offsets(self):
        """Left end of every part's segment."""
        out, acc = [], Fraction(0)
        for z in self.scales:
            out.append(acc)
            acc += z
        return out

    def y_offsets(self):
        """Bottom end of every part's segment."""
        below = [Fraction(0)] * len(self.base)
        acc = Fraction(0)
        for position in self.base.inverse():
            below[position - 1] = acc
            acc += self.scales[position - 1]
        return below

    def to_json(self):
        return {
            'base': str(self.base),
            'scales': [fraction_str(z) for z in self.scales],
        }

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or set(data) != {'base', 'scales'}:
            raise InvalidPermutonError(
                'permuton spec needs exactly the keys "base" and "scales"')
        scales = data['scales']
        if not isinstance(scales, list) or \
                not all(isinstance(z, (str, int)) for z in scales):
            raise InvalidPermutonError(
                'scales must be a list of "p/q" strings')
        return make_blowup(parse_permutation(str(data["base"])), scales)


def make_blowup(base, scales):
    return BlowupPermuton(base, tuple(scales))


def load_permuton(path):
    """Read a permuton spec file ``{"base": ..., "scales": [...]}``."""
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise InvalidPermutonError('cannot read permuton %s: %s' % (path, e))
    return BlowupPermuton.from_json(data)


def blowup_pattern(base, counts):
    """Pattern of ``counts[i]`` increasing points placed in part ``i``."""
    counts = list(counts)
    if len(counts) != len(base):
        raise PreconditionError('%d counts for a base of size %d'
                                % (len(counts), len(base)))
    if any(c < 0 for c in counts) or sum(counts) < 1:
        raise PreconditionError('counts must be non-negative and not all 0')
    keys = [(base[part], r) for part, c in enumerate(counts)
            for r in range(c)]
    return Permutation(standardize(keys))


@functools.lru_cache(maxsize=65536)
def _matching_counts(sigma, base):
    """Count vectors ``c`` with ``blowup_pattern(base, c) == sigma``.

    Points are taken in x-order, so their parts are weakly increasing;
    a branch is cut as soon as the points so far stop being
    order-isomorphic to the matching prefix of ``sigma``.
    """
    m, k = len(sigma), len(base)
    found = []
    keys = []
    counts = [0] * k

    def extend(j, start):
        if j == m:
            found.append(tuple(counts))
            return
        target = sigma[j]
        for part in range(start, k):
            key = (base[part], counts[part])
            if all((key > previous) == (target > sigma[i])
                   for i, previous in enumerate(keys)):
                keys.append(key)
                counts[part] += 1
                extend(j + 1, part)
                counts[part] -= 1
                keys.pop()

    extend(0, 0)
    return tuple(found)


def matching_counts(sigma, base):
    return _matching_counts(sigma.word, base.word)


def _check_sigma(sigma, max_size):
    if len(sigma) == 0:
        raise PreconditionError('the empty permutation is not a pattern')
    settings.check_bound('density', len(sigma), max_size)


def exact_density(sigma, P, max_size=None):
    """Probability that ``len(sigma)`` random points of ``P`` form it."""
    _check_sigma(sigma, max_size)
    m = len(sigma)
    total = Fraction(0)
    for counts in matching_counts(sigma, P.base):
        term = Fraction(multinomial(m, counts))
        for z, c in zip(P.scales, counts):
            if c:
                term *= z ** c
        total += term
    return total


def density_gradient(sigma, P, max_size=None):
    """Exact partial derivatives of ``d(sigma, P)`` in every scale."""
    _check_sigma(sigma, max_size)
    m = len(sigma)
    grad = [Fraction(0)] * len(P)
    for counts in matching_counts(sigma, P.base):
        weight = multinomial(m, counts)
        for p, cp in enumerate(counts):
            if not cp:
                continue
            term = Fraction(weight * cp)
            for q, (z, c) in enumerate(zip(P.scales, counts)):
                e = c - 1 if q == p else c
                if e:
                    term *= z ** e
            grad[p] += term
    return grad


def density_polynomial(sigma, base, part_scales, max_size=None):
    """The count-vector sum with polynomial scales for each part."""
    _check_sigma(sigma, max_size)
    if len(part_scales) != len(base):
        raise PreconditionError('%d scales for a base of size %d'
                                % (len(part_scales), len(base)))
    m = len(sigma)
    ring = part_scales[0].ring
    total = ring.zero
    powers = {}
    for counts in matching_counts(sigma, base):
        term = ring.constant(multinomial(m, counts))
        for part, c in enumerate(counts):
            if c:
                if (part, c) not in powers:
                    powers[part, c] = part_scales[part] ** c
                term = term * powers[part, c]
        total = total + term
    return total


def symbolic_density(sigma, base, variable_names=None, max_size=None):
    """``d(sigma, .)`` as a polynomial in symbolic scales of ``base``.

    Args:
        variable_names (list): one :class:`Variable` per part, default
                               ``z[1], ..., z[k]``
    """
    if variable_names is None:
        variable_names = [Variable.z(i) for i in range(1, len(base) + 1)]
    variable_names = list(variable_names)
    if len(variable_names) != len(base):
        raise PreconditionError('%d variables for a base of size %d'
                                % (len(variable_names), len(base)))
    ring = PolynomialRing(variable_names)
    return density_polynomial(sigma, base,
                              [ring.gen(v) for v in variable_names],
                              max_size=max_size)


@dataclass(frozen=True)
class DensityEstimate:
    mean: float
    standard_error: float
    trials: int
    ties_redrawn: int = 0

    def to_json(self):
        return {
            'mean': self.mean,
            'standard_error': self.standard_error,
            'trials': self.trials,
            'ties_redrawn': self.ties_redrawn,
        }


class _Sampler:
    """Draws point sets of a permuton in vectorized batches."""

    def __init__(self, P):
        self.k = len(P)
        self.scales = np.array([float(z) for z in P.scales])
        self.x0 = np.array([float(v) for v in P.x_offsets()])
        self.y0 = np.array([float(v) for v in P.y_offsets()])
        self.cumulative = np.cumsum(self.scales)
        self.cumulative[-1] = 1.0
        self.ties_redrawn = 0

    def _draw(self, rng, rows, m):
        parts = np.searchsorted(self.cumulative, rng.random((rows, m)),
                                side='right')
        parts = np.minimum(parts, self.k - 1)
        u = rng.random((rows, m))
        x = self.x0[parts] + self.scales[parts] * u
        y = self.y0[parts] + self.scales[parts] * u
        return x, y

    @staticmethod
    def _tied(v):
        s = np.sort(v, axis=1)
        return (np.diff(s, axis=1) == 0).any(axis=1)

    def points(self, rng, rows, m):
        """``rows`` samples of ``m`` points without coordinate ties."""
        x, y = self._draw(rng, rows, m)
        while True:
            bad = self._tied(x) | self._tied(y)
            count = int(bad.sum())
            if not count:
                return x, y
            self.ties_redrawn += count
            logger.debug('redrawing %d samples with tied coordinates', count)
            x[bad], y[bad] = self._draw(rng, count, m)

    @staticmethod
    def patterns(x, y):
        """1-based patterns of each row of points, as an integer array."""
        order = np.argsort(x, axis=1)
        ys = np.take_along_axis(y, order, axis=1)
        return np.argsort(np.argsort(ys, axis=1), axis=1) + 1


#: trials sharing one generator; fixed so estimates ignore ``chunk_size``
SEED_BLOCK = 1024


def _block_rng(seed, block):
    return np.random.default_rng(np.random.SeedSequence(seed,
                                                        spawn_key=(block,)))


def sample_permutation(P, n, seed=0):
    """A ``P``-random permutation of size ``n``; deterministic per seed."""
    if n < 1:
        raise PreconditionError('size must be positive, got %d' % n)
    sampler = _Sampler(P)
    x, y = sampler.points(_block_rng(seed, 0), 1, n)
    return Permutation(int(v) for v in sampler.patterns(x, y)[0])


def estimate_density(sigma, P, trials, seed=0, chunk_size=None):
    """Monte Carlo estimate of ``d(sigma, P)`` from ``trials`` samples.

    Trial ``t`` is drawn from the generator seeded by
    ``SeedSequence(seed, spawn_key=(t // SEED_BLOCK,))``. ``chunk_size``
    only sets how many trials are classified per vectorized batch; it is
    rounded up to whole seed blocks and never changes the result.
    """
    if trials < 1:
        raise PreconditionError('trials must be positive, got %d' % trials)
    if len(sigma) == 0:
        raise PreconditionError('the empty permutation is not a pattern')
    if chunk_size is None:
        chunk_size = settings.config.sampling.chunk_size
    if chunk_size < 1:
        raise PreconditionError('chunk size must be positive, got %d'
                                % chunk_size)
    per_batch = -(-chunk_size // SEED_BLOCK)
    sampler = _Sampler(P)
    target = np.array(sigma.word)
    m = len(sigma)
    hits = 0
    blocks = range(-(-trials // SEED_BLOCK))
    for first in range(0, len(blocks), per_batch):
        xs, ys = [], []
        for block in blocks[first:first + per_batch]:
            rows = min(SEED_BLOCK, trials - block * SEED_BLOCK)
            x, y = sampler.points(_block_rng(seed, block), rows, m)
            xs.append(x)
            ys.append(y)
        x, y = np.concatenate(xs), np.concatenate(ys)
        hits += int((sampler.patterns(x, y) == target).all(axis=1).sum())
    mean = hits / trials
    return DensityEstimate(mean, math.sqrt(mean * (1 - mean) / trials),
                           trials, sampler.ties_redrawn)


def random_blowup(rng, max_base_size=5, max_denominator=64):
    """Random blow-up with rational scales of denominator ``max_denominator``.

    Args:
        rng (numpy.random.Generator): source of randomness
    """
    if max_base_size < 1:
        raise PreconditionError('base size must be positive, got %d'
                                % max_base_size)
    if max_denominator < 1:
        raise PreconditionError('denominator must be positive, got %d'
                                % max_denominator)
    size = int(rng.integers(1, max_base_size + 1))
    size = min(size, max_denominator)
    base = Permutation(int(v) + 1 for v in rng.permutation(size))
    cuts = sorted(int(c) for c in
                  rng.choice(np.arange(1, max_denominator), size - 1,
                             replace=False))
    bounds = [0] + cuts + [max_denominator]
    scales = [Fraction(b - a, max_denominator)
              for a, b in zip(bounds, bounds[1:])]
    return BlowupPermuton(base, tuple(scales))


def discretize(P, M):
    """Finite permutation with ``round(M * zi)`` increasing points per part."""
    counts = [round(M * z) for z in P.scales]
    return blowup_pattern(P.base, counts)
