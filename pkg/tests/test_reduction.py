from fractions import Fraction

import numpy as np
import pytest

from lynperm.common import MissingDependencyError
from lynperm.flag_calc import flag_product
from lynperm.perm_core import enumerate_permutations, parse_permutation
from lynperm.permuton_model import exact_density, make_blowup, random_blowup
from lynperm.polynomial import Variable
from lynperm.reduction import (ReductionTable, build_reduction_table,
                               evaluate_polynomial,
                               lyndon_factor_permutation, reduce_to_lyndon,
                               reduction_key, reduction_order_compare)


def P(text):
    return parse_permutation(text)


def test_reduction_order():
    assert reduction_order_compare(P('321'), P('213')) == -1
    assert reduction_order_compare(P('12'), P('21')) == 1
    assert reduction_order_compare(P('132'), P('132')) == 0
    assert reduction_key(P('2143')) > reduction_key(P('4321'))


def test_lyndon_factors():
    assert lyndon_factor_permutation(P('213')) == [P('21'), P('1')]
    assert lyndon_factor_permutation(P('21453')) == [P('21453')]
    assert lyndon_factor_permutation(P('12')) == [P('1'), P('1')]
    assert lyndon_factor_permutation(P('321645987')) == \
        [P('321'), P('312654')]


def test_small_tables():
    table = build_reduction_table(1)
    assert len(table) == 1
    assert table[P('1')] == 1

    table = build_reduction_table(2)
    assert str(table[P('12')]) == '1 - x[21]'
    assert str(table[P('21')]) == 'x[21]'
    assert table[P('1')] == 1


def test_reduce_to_lyndon():
    table = build_reduction_table(3)
    assert len(table) == 9
    assert str(table[P('213')]) == \
        '3*x[21] - x[132] - 2*x[231] - 2*x[312] - 3*x[321]'
    for text in ['321', '312', '231', '21', '132']:
        assert str(table[P(text)]) == 'x[%s]' % text
    assert reduce_to_lyndon(P('213'), table) == table[P('213')]

    # the entry for 21 is needed before 213
    partial = ReductionTable(3, table.ring)
    partial.entries[P('1')] = table.ring.one
    with pytest.raises(MissingDependencyError):
        reduce_to_lyndon(P('213'), partial)


def test_round_trip():
    table = build_reduction_table(4)
    rng = np.random.default_rng(11)
    for _ in range(20):
        Pi = random_blowup(rng)
        values = table.evaluate(Pi)
        for p in enumerate_permutations(4):
            assert values[p] == exact_density(p, Pi)


def test_evaluate_polynomial():
    table = build_reduction_table(2)
    poly = table[P('12')]
    assert evaluate_polynomial(poly, {'x[21]': Fraction(1, 2)}) == \
        Fraction(1, 2)
    assert evaluate_polynomial(poly, {Variable.x(P('21')): 1}) == 0
    assert evaluate_polynomial(table.ring.one, {}) == 1

    halves = make_blowup(P('21'), ['1/2', '1/2'])
    assert evaluate_polynomial(poly, table.lyndon_assignment(halves)) == \
        exact_density(P('12'), halves)


def test_table_json():
    data = build_reduction_table(2).to_json()
    assert data['12'] == [{'monomial': [], 'coeff': '1/1'},
                          {'monomial': ['x[21]^1'], 'coeff': '-1/1'}]
    assert data['1'] == [{'monomial': [], 'coeff': '1/1'}]


def test_leading_coefficient_positive():
    for p in enumerate_permutations(4):
        factors = lyndon_factor_permutation(p)
        assert flag_product(factors)[p] > 0
