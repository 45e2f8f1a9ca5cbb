import json

import pytest

from lynperm.cli import main, render_text
from lynperm.common import commands


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


def test_lyndon_enum(capsys):
    code, out = run(capsys, 'lyndon-enum', '--k', '3')
    assert code == 0
    assert json.loads(out) == ['321', '312', '231', '21', '132']

    code, out = run(capsys, 'lyndon-enum', '--k', '2', '--trivial')
    assert json.loads(out) == ['21', '1']


def test_flag_product(capsys):
    code, out = run(capsys, 'flag-product', '12', '1')
    assert code == 0
    assert json.loads(out) == [['123', '1/1'], ['132', '2/3'],
                               ['213', '2/3'], ['231', '1/3'],
                               ['312', '1/3']]

    code, out = run(capsys, '--output', 'text', 'flag-product', '1', '1')
    assert out.strip() == '12 + 21'


def test_reduce(capsys, tmpdir):
    code, out = run(capsys, 'reduce', '12')
    assert code == 0
    assert json.loads(out) == '1 - x[21]'

    spec = tmpdir.join('p.json')
    spec.write('{"base": "21", "scales": ["1/3", "2/3"]}')
    code, out = run(capsys, 'reduce', '12', '--spec', str(spec))
    result = json.loads(out)
    assert result['value'] == result['exact'] == '5/9'


def test_densities(capsys, tmpdir):
    code, out = run(capsys, '--output', 'text', 'density', '12', '231')
    assert out.strip() == '1/3 (~0.333333)'

    spec = tmpdir.join('p.json')
    spec.write('{"base": "21", "scales": ["1/2", "1/2"]}')
    code, out = run(capsys, 'permuton-density', '21', '12', '--spec',
                    str(spec))
    assert json.loads(out) == {'21': '1/2', '12': '1/2'}

    code, out = run(capsys, 'permuton-density', '21', '--spec', str(spec),
                    '--symbolic')
    assert json.loads(out) == {'21': [{'monomial': ['z[1]^1', 'z[2]^1'],
                                       'coeff': '2/1'}]}


def test_seeded_output_is_stable(capsys, tmpdir):
    spec = tmpdir.join('p.json')
    spec.write('{"base": "231", "scales": ["1/4", "1/4", "1/2"]}')
    args = ['permuton-sample', '--spec', str(spec), '--n', '12',
            '--seed', '5']
    _, first = run(capsys, *args)
    _, second = run(capsys, *args)
    assert first == second
    assert len(json.loads(first)) == len('1,2,3,4,5,6,7,8,9,10,11,12')


def test_jacobian(capsys, tmpdir):
    point = tmpdir.join('point.json')
    point.write('{"s[1]": "1/2", "t[1,1]": "1/4", "t[1,2]": "1/4"}')
    code, out = run(capsys, 'jacobian', '--k', '2', '--spec', str(point))
    result = json.loads(out)
    assert code == 0
    assert result['determinant'] == '1/8'
    assert result['symbolic_determinant'] == '4*s[1]*t[1,1]*t[1,2]'
    assert result['monomial_coefficient'] == '4/1'
    assert result['permuton']['scales'] == ['1/8', '1/8', '3/4']


def test_errors(capsys):
    code, out = run(capsys, 'blocks', '1x2')
    assert code == 1
    assert json.loads(out)['error']['type'] == 'InvalidPermutationError'

    code, out = run(capsys, 'lyndon-enum', '--k', '100')
    assert code == 1
    assert json.loads(out)['error']['type'] == 'BoundExceededError'

    for option in ['--size', '--denominator']:
        code, out = run(capsys, 'random-permuton', option, '0')
        assert code == 1
        assert json.loads(out)['error']['type'] == 'PreconditionError'

    with pytest.raises(SystemExit) as e:
        main(['no-such-command'])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(['lyndon-enum', '--k', 'three'])
    assert e.value.code == 2


def test_verify(capsys):
    code, out = run(capsys, 'verify', '--only', 'lyndon-enumeration',
                    'flag-product-example')
    assert code == 0
    assert [r['passed'] for r in json.loads(out)] == [True, True]

    code, out = run(capsys, 'verify', '--perms', '321', '21')
    result = json.loads(out)
    assert result['holds'] is True
    assert result['solutions'] == [[[1, 2, 3], [4, 5]]]


def test_render_text():
    assert render_text({'a': [1, 2], 'b': True}) == 'a:\n  1\n  2\nb: true'
    assert render_text([]) == '[]'


def test_operations_exposed_once():
    exposed = [op for f in commands.values() for op in f.__operations__]
    assert len(exposed) == len(set(exposed))
    for op in ['parse_permutation', 'direct_sum', 'decompose_blocks',
               'is_indecomposable', 'increasing_segments', 'pattern_at',
               'pattern_density', 'enumerate_permutations',
               'alphabet_compare', 'is_lyndon_word', 'cfl_factorize',
               'block_word_of', 'compare_L', 'is_lyndon_permutation',
               'enumerate_lyndon_permutations', 'lyndon_counts_from_series',
               'shuffle_product', 'max_shuffle_constituent', 'flag_product',
               'constituents_violating_flag_lemma', 'density_of_sum',
               'make_blowup', 'blowup_pattern', 'exact_density',
               'symbolic_density', 'sample_permutation', 'estimate_density',
               'reduction_order_compare', 'lyndon_factor_permutation',
               'reduce_to_lyndon', 'build_reduction_table',
               'evaluate_polynomial', 'build_PiL', 'density_in_s_t',
               'jacobian_matrix', 'jacobian_determinant', 'find_witness',
               'det_monomial_coefficient', 'verify_lemma_lyndon']:
        assert op in exposed, op
