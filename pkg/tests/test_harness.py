import pytest

from lynperm import harness
from lynperm.common import PreconditionError, UnsupportedError
from lynperm.perm_core import parse_permutation


def test_quick_checks():
    names = ['lyndon-enumeration', 'series-identity', 'flag-product-example',
             'homogeneity']
    results = harness.run_checks(names=names)
    assert [r.name for r in results] == names
    assert all(r.passed for r in results)
    assert results[0].to_json()['checked'] == 2


def test_run_check_reports_errors():
    def broken(seed=0, **kwargs):
        raise UnsupportedError('not here')

    result = harness.run_check('broken', broken)
    assert not result.passed
    assert result.detail == 'UnsupportedError: not here'


def test_run_checks_arguments():
    with pytest.raises(PreconditionError):
        harness.run_checks(level='lunch')
    with pytest.raises(PreconditionError):
        harness.run_checks(names=['no-such-check'])


def test_lyndon_tuples():
    tuples = list(harness.lyndon_tuples(3))
    assert [parse_permutation('21'), parse_permutation('1')] in tuples
    assert [parse_permutation('132')] in tuples
    assert all(len(set(t)) == len(t) for t in tuples)
    assert all(sum(len(p) for p in t) <= 3 for t in tuples)


def test_exhaustive_checks():
    ok, checked, _ = harness.check_lemma_lyndon(lemma_total=5)
    assert ok and checked > 0
    ok, checked, _ = harness.check_product_identity(product_total=4)
    assert ok and checked > 0
    ok, _, detail = harness.check_reduction_round_trip(seed=3)
    assert ok, detail


@pytest.mark.slow
def test_desk_level():
    results = harness.run_checks('desk', seed=0)
    assert len(results) == len(harness.CHECKS)
    assert all(r.passed for r in results)
