from fractions import Fraction

import numpy as np
import pytest

from lynperm.common import BoundExceededError, PreconditionError
from lynperm.flag_calc import (PermSum, constituents_violating_flag_lemma,
                               density_of_sum, flag_product,
                               flag_product_by_partitions)
from lynperm.perm_core import enumerate_permutations, parse_permutation
from lynperm.permuton_model import exact_density, make_blowup, random_blowup


def P(text):
    return parse_permutation(text)


def S(terms):
    return PermSum((P(p), Fraction(c)) for p, c in terms.items())


def test_worked_example():
    product = flag_product([P('12'), P('1')])
    assert product == S({'123': 1, '132': '2/3', '231': '1/3',
                         '213': '2/3', '312': '1/3'})
    assert str(product) == '123 + 2/3*132 + 2/3*213 + 1/3*231 + 1/3*312'
    assert product.total() == 3
    assert product.size() == 3


def test_small_products():
    assert flag_product([P('1'), P('1')]) == S({'12': 1, '21': 1})
    assert flag_product([P('231')]) == S({'231': 1})
    with pytest.raises(PreconditionError):
        flag_product([])
    with pytest.raises(BoundExceededError):
        flag_product([P('12345'), P('1234')])


def test_partitions_agree():
    for parts in ([P('21'), P('1'), P('1')], [P('12'), P('21')],
                  [P('1'), P('231')]):
        assert flag_product(parts) == flag_product_by_partitions(parts)


def test_product_of_densities():
    rng = np.random.default_rng(5)
    parts = [P('21'), P('1'), P('12')]
    product = flag_product(parts)
    for _ in range(5):
        Pi = random_blowup(rng)
        expected = Fraction(1)
        for p in parts:
            expected *= exact_density(p, Pi)
        assert density_of_sum(product, Pi) == expected


def test_density_of_sum():
    Pi = make_blowup(P('21'), ['1/2', '1/2'])
    s = S({'12': '1/2', '21': '1/3'})
    assert density_of_sum(s, Pi) == Fraction(1, 4) + Fraction(1, 6)
    every = PermSum((p, 1) for p in enumerate_permutations(3))
    assert density_of_sum(every, Pi) == 1

    diagonal = make_blowup(P('1'), [1])
    assert density_of_sum(flag_product([P('12'), P('1')]), diagonal) == 1

    with pytest.raises(PreconditionError):
        density_of_sum(S({'1': 1, '12': 1}), Pi)


def test_constituents_below():
    for text in ['213', '12', '231', '2143', '1243', '21354']:
        assert constituents_violating_flag_lemma(P(text)) == []


def all_permutations(max_size):
    return [p for n in range(1, max_size + 1)
            for p in enumerate_permutations(n)]


def times(a, s):
    """``a x s`` for a permutation ``a`` and a sum ``s``."""
    out = PermSum()
    for sigma, c in s.items():
        out = out + flag_product([a, sigma]).scale(c)
    return out


def test_commutative():
    perms = all_permutations(5)
    for a in perms:
        for b in perms:
            if len(a) + len(b) <= 6:
                assert flag_product([a, b]) == flag_product([b, a])


def test_associative():
    perms = all_permutations(4)
    for a in perms:
        for b in perms:
            for c in perms:
                if len(a) + len(b) + len(c) > 6:
                    continue
                product = flag_product([a, b, c])
                assert times(a, flag_product([b, c])) == product
                assert flag_product([c, a, b]) == product
