from fractions import Fraction

import pytest

from lynperm.common import (BoundExceededError, InvalidPermutationError,
                            PreconditionError)
from lynperm.perm_core import (EMPTY, Permutation, decompose_blocks,
                               direct_sum, enumerate_permutations,
                               increasing_segments, is_indecomposable,
                               parse_permutation, pattern_at,
                               pattern_density, standardize)


def P(text):
    return parse_permutation(text)


def test_parse():
    assert P('231').word == (2, 3, 1)
    assert str(P('10,1,2,3,4,5,6,7,8,9')) == '10,1,2,3,4,5,6,7,8,9'
    assert P('10,1,2,3,4,5,6,7,8,9')[0] == 10
    for bad in ['', '122', '13', 'ab', '1,,2']:
        with pytest.raises(InvalidPermutationError):
            P(bad)
    assert P('2413').inverse() == P('3142')


def test_direct_sum():
    assert direct_sum([P('321'), P('312'), P('321')]) == P('321645987')
    assert direct_sum([P('21'), P('1'), P('231')]) == P('213564')
    assert direct_sum([]) == EMPTY
    assert direct_sum([EMPTY, P('1')]) == P('1')


def test_blocks():
    d = decompose_blocks(P('321645987'))
    assert [str(b) for b in d.blocks] == ['321', '312', '321']
    assert [(r.start, r.stop) for r in d.intervals()] == \
        [(1, 4), (4, 7), (7, 10)]
    assert len(decompose_blocks(P('123'))) == 3
    assert direct_sum(decompose_blocks(P('2143765')).blocks) == P('2143765')

    assert is_indecomposable(P('1'))
    assert is_indecomposable(P('231'))
    assert not is_indecomposable(P('213'))
    with pytest.raises(PreconditionError):
        decompose_blocks(EMPTY)


def test_increasing_segments():
    assert increasing_segments(P('1')) == [1]
    assert increasing_segments(P('3412')) == [2, 2]
    assert increasing_segments(P('2341')) == [3, 1]
    assert increasing_segments(P('321')) == [1, 1, 1]


def test_patterns():
    assert pattern_at(P('2413'), [1, 2, 4]) == P('132')
    assert standardize([30, 10, 20]) == (3, 1, 2)
    with pytest.raises(PreconditionError):
        pattern_at(P('2413'), [2, 1])
    with pytest.raises(PreconditionError):
        pattern_at(P('2413'), [0, 1])

    assert pattern_density(P('12'), P('132')) == Fraction(2, 3)
    assert pattern_density(P('1'), P('21')) == 1
    with pytest.raises(PreconditionError):
        pattern_density(P('123'), P('12'))


def test_enumerate():
    perms = enumerate_permutations(3)
    assert [str(p) for p in perms] == \
        ['123', '132', '213', '231', '312', '321']
    assert len(enumerate_permutations(5)) == 120
    with pytest.raises(BoundExceededError):
        enumerate_permutations(100)
    with pytest.raises(PreconditionError):
        enumerate_permutations(0)
    assert Permutation.identity(3) == P('123')


def test_worked_examples():
    assert increasing_segments(P('312456')) == [1, 2, 3]
    assert pattern_at(P('21453'), [3, 4, 5]) == P('231')
    assert pattern_at(P('231'), [1, 3]) == P('21')
    assert pattern_density(P('12'), P('231')) == Fraction(1, 3)
    assert pattern_density(P('2413'), P('2413')) == 1
    assert [str(b) for b in decompose_blocks(P('2413')).blocks] == ['2413']
    assert not is_indecomposable(P('12'))
