import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from lynperm.common import InvalidPermutonError, PreconditionError
from lynperm.perm_core import (Permutation, enumerate_permutations,
                               parse_permutation, pattern_density,
                               standardize)
from lynperm.permuton_model import (BlowupPermuton, blowup_pattern,
                                    density_gradient, discretize,
                                    estimate_density, exact_density,
                                    load_permuton, make_blowup,
                                    matching_counts, random_blowup,
                                    sample_permutation, symbolic_density,
                                    SEED_BLOCK)
from lynperm.polynomial import Variable


def P(text):
    return parse_permutation(text)


@pytest.fixture
def halves():
    return make_blowup(P('21'), ['1/2', '1/2'])


def test_make_blowup():
    Pi = make_blowup(P('42315'), ['2/5', '1/5', '1/10', '1/10', '1/5'])
    assert Pi.x_offsets() == [0, Fraction(2, 5), Fraction(3, 5),
                              Fraction(7, 10), Fraction(4, 5)]
    # values 1..5 sit at positions 4, 2, 3, 1, 5
    assert Pi.y_offsets() == [Fraction(2, 5), Fraction(1, 10),
                              Fraction(3, 10), 0, Fraction(4, 5)]

    for base, scales in [('21', ['1/2']), ('21', ['3/2', '-1/2']),
                         ('21', ['1/2', '1/3']), ('21', [0.5, 0.5])]:
        with pytest.raises(InvalidPermutonError):
            make_blowup(P(base), scales)


def test_load_permuton(tmpdir, halves):
    path = tmpdir.join('p.json')
    path.write(json.dumps(halves.to_json()))
    assert load_permuton(str(path)) == halves
    assert halves.to_json() == {'base': '21', 'scales': ['1/2', '1/2']}

    path.write('{"base": "21"}')
    with pytest.raises(InvalidPermutonError):
        load_permuton(str(path))
    with pytest.raises(InvalidPermutonError):
        load_permuton(str(tmpdir.join('missing.json')))
    with pytest.raises(InvalidPermutonError):
        BlowupPermuton.from_json({'base': '21', 'scales': [0.5, 0.5]})


def test_blowup_pattern():
    assert blowup_pattern(P('21'), [1, 2]) == P('312')
    assert blowup_pattern(P('2413'), [1, 1, 1, 1]) == P('2413')
    assert blowup_pattern(P('21'), [0, 2]) == P('12')
    with pytest.raises(PreconditionError):
        blowup_pattern(P('21'), [0, 0])
    with pytest.raises(PreconditionError):
        blowup_pattern(P('21'), [1])


def test_matching_counts():
    base = P('2413')
    for sigma in enumerate_permutations(3):
        found = matching_counts(sigma, base)
        assert all(blowup_pattern(base, c) == sigma for c in found)
    total = sum(len(matching_counts(sigma, base))
                for sigma in enumerate_permutations(3))
    # every count vector of three points over four parts
    assert total == 20


def test_exact_density(halves):
    assert exact_density(P('21'), halves) == Fraction(1, 2)
    assert exact_density(P('12'), halves) == Fraction(1, 2)
    assert exact_density(P('321'), halves) == 0
    assert exact_density(P('1'), halves) == 1

    rng = np.random.default_rng(1)
    for _ in range(5):
        Pi = random_blowup(rng)
        total = sum(exact_density(sigma, Pi)
                    for sigma in enumerate_permutations(4))
        assert total == 1


def test_discretize_converges(halves):
    finite = discretize(halves, 40)
    assert finite == P(','.join(str(v) for v in
                                list(range(21, 41)) + list(range(1, 21))))
    assert abs(pattern_density(P('21'), finite) -
               exact_density(P('21'), halves)) < Fraction(1, 20)


def test_symbolic_density():
    z1, z2 = Variable.z(1), Variable.z(2)
    poly = symbolic_density(P('21'), P('21'))
    assert str(poly) == '2*z[1]*z[2]'
    assert str(symbolic_density(P('12'), P('21'))) == 'z[1]^2 + z[2]^2'
    assert str(symbolic_density(P('1'), P('231'))) == 'z[1] + z[2] + z[3]'

    Pi = make_blowup(P('21'), ['1/3', '2/3'])
    assert poly.evaluate({z1: Fraction(1, 3), z2: Fraction(2, 3)}) == \
        exact_density(P('21'), Pi)
    assert density_gradient(P('21'), Pi) == [Fraction(4, 3), Fraction(2, 3)]
    assert density_gradient(P('12'), Pi) == [Fraction(2, 3), Fraction(4, 3)]


def test_sample_permutation(halves):
    diagonal = make_blowup(P('1'), [1])
    assert sample_permutation(diagonal, 7, seed=3) == P('1234567')
    assert sample_permutation(halves, 1) == P('1')
    assert sample_permutation(halves, 12, seed=9) == \
        sample_permutation(halves, 12, seed=9)
    with pytest.raises(PreconditionError):
        sample_permutation(halves, 0)


def test_estimate_density(halves):
    estimate = estimate_density(P('21'), halves, 100000, seed=0)
    assert abs(estimate.mean - 0.5) <= 4 * estimate.standard_error
    assert estimate.trials == 100000

    assert estimate_density(P('1'), halves, 1000).mean == 1.0
    assert estimate_density(P('321'), halves, 1000).mean == 0.0

    # the seed stream is keyed by trial, not by batch
    a = estimate_density(P('21'), halves, 5000, seed=2, chunk_size=1000)
    b = estimate_density(P('21'), halves, 5000, seed=2, chunk_size=5000)
    c = estimate_density(P('21'), halves, 5000, seed=2, chunk_size=1)
    assert a == b == c
    # a prefix of the trials repeats the same draws
    d = estimate_density(P('21'), halves, 2 * SEED_BLOCK, seed=2)
    e = estimate_density(P('21'), halves, SEED_BLOCK, seed=2)
    f = estimate_density(P('21'), halves, SEED_BLOCK, seed=2, chunk_size=7)
    assert e == f
    hits_d, hits_e = round(d.mean * d.trials), round(e.mean * e.trials)
    assert hits_e <= hits_d <= hits_e + SEED_BLOCK
    with pytest.raises(PreconditionError):
        estimate_density(P('21'), halves, 0)
    with pytest.raises(PreconditionError):
        estimate_density(P('21'), halves, 10, chunk_size=0)


def test_random_blowup():
    rng = np.random.default_rng(4)
    Pi = random_blowup(rng, 1, 1)
    assert Pi.base == P('1') and Pi.scales == (1,)
    for size, denominator in [(0, 64), (5, 0), (-1, -1)]:
        with pytest.raises(PreconditionError):
            random_blowup(rng, size, denominator)


def spread(base):
    """Blow-up of ``base`` with scales proportional to 1, 2, ..., k."""
    k = len(base)
    return make_blowup(base, [Fraction(i, k * (k + 1) // 2)
                              for i in range(1, k + 1)])


def test_symbolic_density_exhaustive():
    patterns = [s for m in (1, 2, 3) for s in enumerate_permutations(m)]
    for k in range(1, 5):
        for base in enumerate_permutations(k):
            Pi = spread(base)
            assignment = {Variable.z(i): z
                          for i, z in enumerate(Pi.scales, 1)}
            for sigma in patterns:
                poly = symbolic_density(sigma, base)
                assert poly.evaluate(assignment) == exact_density(sigma, Pi)


def test_blowup_pattern_merges_segments():
    for k in range(2, 5):
        for base in enumerate_permutations(k):
            for i in range(k - 1):
                if base[i + 1] != base[i] + 1:
                    continue
                merged = Permutation(standardize(base.word[:i + 1] +
                                                 base.word[i + 2:]))
                for counts in itertools.product(range(3), repeat=k):
                    if not any(counts):
                        continue
                    joined = counts[:i] + (counts[i] + counts[i + 1],) + \
                        counts[i + 2:]
                    assert blowup_pattern(base, counts) == \
                        blowup_pattern(merged, joined)


def test_discretization_bound():
    Pi = make_blowup(P('231'), ['1/5', '3/10', '1/2'])
    finite = discretize(Pi, 100)
    assert len(finite) == 100
    for sigma in enumerate_permutations(3):
        error = abs(exact_density(sigma, Pi) -
                    pattern_density(sigma, finite))
        assert error <= Fraction(5 * 3 ** 2, 100)


@pytest.mark.slow
def test_discretization_bound_large():
    Pi = make_blowup(P('231'), ['1/5', '3/10', '1/2'])
    finite = discretize(Pi, 1000)
    for sigma in enumerate_permutations(2):
        error = abs(exact_density(sigma, Pi) -
                    pattern_density(sigma, finite))
        assert error <= Fraction(5 * 2 ** 2, 1000)
