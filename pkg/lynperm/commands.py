"""Subcommands of the ``lynperm`` command line.

Every command returns a JSON-friendly payload; :mod:`lynperm.cli` prints
it. The ``operations`` of each command name the library functions it
exposes.
"""
import math
from fractions import Fraction

import numpy as np

from . import flag_calc, independence, lyndon_alg, perm_core, \
    permuton_model, reduction, settings
from .common import PreconditionError, argspec, command
from .harness import run_checks
from .perm_core import parse_permutation

_seed = (settings.config.cli.seed, 'random seed')


def _parse_all(texts):
    return [parse_permutation(t) for t in texts]


def _int(text, what):
    try:
        return int(text)
    except ValueError:
        raise PreconditionError('%s must be an integer, got %r' % (what, text))


@command(help='indecomposable blocks of a permutation',
         operations=('parse_permutation', 'decompose_blocks',
                     'is_indecomposable', 'increasing_segments'))
def blocks(perm):
    p = parse_permutation(perm)
    decomposition = perm_core.decompose_blocks(p)
    return {
        'permutation': p,
        'blocks': list(decomposition.blocks),
        'intervals': [[r.start, r.stop - 1]
                      for r in decomposition.intervals()],
        'indecomposable': perm_core.is_indecomposable(p),
        'increasing_segments': perm_core.increasing_segments(p),
    }


@command(help='direct sum of permutations', operations=('direct_sum',))
def direct_sum(*perms):
    return perm_core.direct_sum(_parse_all(perms))


@command(help='pattern induced by 1-based positions',
         operations=('pattern_at',))
def pattern(perm, *positions):
    indices = [_int(i, 'position') for i in positions]
    return perm_core.pattern_at(parse_permutation(perm), indices)


@command(help='density of a pattern in a permutation',
         operations=('pattern_density',))
def density(sigma, perm):
    return perm_core.pattern_density(parse_permutation(sigma),
                                     parse_permutation(perm))


@command(help='all permutations of one size',
         operations=('enumerate_permutations',))
def permutations(n):
    return perm_core.enumerate_permutations(_int(n, 'size'))


def _alphabet_compare(p, q):
    try:
        return lyndon_alg.alphabet_compare(p, q)
    except PreconditionError:
        return None


@command(help='compare two permutations in the three orders',
         description='Letter order of the alphabet (only for '
                     'indecomposable permutations), the <_L order of '
                     'block words and the order used by the reduction.',
         operations=('alphabet_compare', 'compare_L',
                     'reduction_order_compare'))
def compare(p, q):
    p, q = parse_permutation(p), parse_permutation(q)
    return {
        'alphabet': _alphabet_compare(p, q),
        'lyndon_order': lyndon_alg.compare_L(p, q),
        'reduction_order': reduction.reduction_order_compare(p, q),
    }


@command(help='block word of a permutation and whether it is Lyndon',
         operations=('block_word_of', 'is_lyndon_word',
                     'is_lyndon_permutation'))
def lyndon_check(perm):
    p = parse_permutation(perm)
    word = lyndon_alg.block_word_of(p)
    return {
        'block_word': word,
        'lyndon_word': lyndon_alg.is_lyndon_word(word),
        'lyndon_permutation': lyndon_alg.is_lyndon_permutation(p),
    }


@command(help='Lyndon factorization of a permutation',
         description='Chen-Fox-Lyndon factors of the block word, the '
                     'matching Lyndon permutations, and every constituent '
                     'of their flag product that does not come before '
                     'the permutation (always none).',
         operations=('cfl_factorize', 'lyndon_factor_permutation',
                     'constituents_violating_flag_lemma'))
def factorize(perm):
    p = parse_permutation(perm)
    return {
        'block_word': lyndon_alg.block_word_of(p),
        'cfl_factors': lyndon_alg.cfl_factorize(lyndon_alg.block_word_of(p)),
        'lyndon_factors': reduction.lyndon_factor_permutation(p),
        'violating_constituents':
            flag_calc.constituents_violating_flag_lemma(p),
    }


@command(help='Lyndon permutations up to a size, in decreasing order',
         operations=('enumerate_lyndon_permutations',))
def lyndon_enum(k=(3, 'maximum size'),
                trivial=(False, 'include the permutation 1')):
    return lyndon_alg.enumerate_lyndon_permutations(k,
                                                    include_trivial=trivial)


@command(help='numbers of Lyndon permutations of each size',
         description='Solves the power series identity for the counts and '
                     'cross-checks them against direct enumeration where '
                     'that is within the size bound.',
         operations=('lyndon_counts_from_series', 'lyndon_size_counts',
                     'indecomposable_counts', 'feasible_dimension'))
def lyndon_counts(k=(6, 'maximum size'),
                  reverse=(False, 'enumerate with the reversed letter '
                                  'order within each size')):
    series = lyndon_alg.lyndon_counts_from_series(k)
    key = (lyndon_alg.reverse_alphabet_key if reverse
           else lyndon_alg.alphabet_key)
    enumerated = None
    if k <= settings.config.bounds.lyndon:
        enumerated = lyndon_alg.lyndon_size_counts(k, key)
    return {
        'series': series,
        'enumerated': enumerated,
        'agree': enumerated is None or enumerated == series,
        'indecomposable': lyndon_alg.indecomposable_counts(k),
        'feasible_dimension': lyndon_alg.feasible_dimension(k),
    }


@command(help='shuffle product of block words such as 21|1',
         operations=('shuffle_product', 'max_shuffle_constituent'))
def shuffle(*words):
    words = [lyndon_alg.BlockWord.parse(w) for w in words]
    product = lyndon_alg.shuffle_product(words)
    try:
        top, coeff = lyndon_alg.max_shuffle_constituent(words)
        largest = {'word': top, 'coeff': coeff}
    except PreconditionError:
        largest = None
    return {'product': product, 'largest': largest}


@command(help='flag product of permutations',
         operations=('flag_product', 'flag_product_by_partitions',
                     'density_of_sum'))
def flag_product(*perms,
                 spec=(None, 'permuton spec file to evaluate the product '
                             'in'),
                 partitions=(False, 'count ordered set partitions '
                                    'directly')):
    parts = _parse_all(perms)
    if partitions:
        product = flag_calc.flag_product_by_partitions(parts)
    else:
        product = flag_calc.flag_product(parts)
    if spec is None:
        return product
    P = permuton_model.load_permuton(spec)
    factors = [permuton_model.exact_density(p, P) for p in parts]
    return {
        'product': product,
        'density': flag_calc.density_of_sum(product, P),
        'factor_densities': factors,
        'product_of_densities': math.prod(factors, start=Fraction(1)),
    }


@command(help='exact pattern densities in a blow-up permuton',
         description='The permuton is read from a JSON spec file '
                     '{"base": "21", "scales": ["1/2", "1/2"]}.',
         operations=('load_permuton', 'make_blowup', 'exact_density',
                     'symbolic_density', 'density_gradient', 'discretize'))
def permuton_density(*perms,
                     spec=argspec(required=True, help='permuton spec file'),
                     symbolic=(False, 'densities as polynomials in the '
                                      'scales z[i]'),
                     gradient=(False, 'also give the partial derivatives '
                                      'in every scale'),
                     discretize=(0, 'also compare with the density in the '
                                    'discretized permutation of this '
                                    'size (0: skip)')):
    P = permuton_model.load_permuton(spec)
    result = {}
    finite = permuton_model.discretize(P, discretize) if discretize else None
    for sigma in _parse_all(perms):
        if symbolic:
            entry = permuton_model.symbolic_density(sigma, P.base)
        else:
            entry = permuton_model.exact_density(sigma, P)
        if gradient or finite is not None:
            entry = {'density': entry}
            if gradient:
                entry['gradient'] = permuton_model.density_gradient(sigma, P)
            if finite is not None:
                entry['discretized'] = perm_core.pattern_density(sigma,
                                                                 finite)
        result[str(sigma)] = entry
    return result


@command(help='pattern of points spread over the parts of a blow-up',
         operations=('blowup_pattern',))
def blowup_pattern(base, counts=argspec(nargs='+', type=int, required=True,
                                        help='points in each part')):
    return permuton_model.blowup_pattern(parse_permutation(base), counts)


@command(help='random permutations and Monte Carlo densities',
         operations=('sample_permutation', 'estimate_density'))
def permuton_sample(spec=argspec(required=True, help='permuton spec file'),
                    n=(10, 'size of the sampled permutation'),
                    seed=_seed,
                    pattern=(None, 'estimate the density of this pattern '
                                   'instead'),
                    trials=(100000, 'number of samples for the estimate')):
    P = permuton_model.load_permuton(spec)
    if pattern is None:
        return permuton_model.sample_permutation(P, n, seed)
    sigma = parse_permutation(pattern)
    return {
        'estimate': permuton_model.estimate_density(sigma, P, trials, seed),
        'exact': permuton_model.exact_density(sigma, P),
    }


@command(help='random rational blow-up permuton spec',
         operations=('random_blowup',))
def random_permuton(size=(5, 'maximum base size'),
                    denominator=(64, 'common denominator of the scales'),
                    seed=_seed):
    rng = np.random.default_rng(seed)
    return permuton_model.random_blowup(rng, size, denominator)


@command(help='polynomial in Lyndon densities for a pattern density',
         operations=('reduce_to_lyndon', 'evaluate_polynomial'))
def reduce(perm, spec=(None, 'permuton spec file to evaluate in')):
    p = parse_permutation(perm)
    table = reduction.build_reduction_table(len(p))
    poly = reduction.reduce_to_lyndon(p, table)
    if spec is None:
        return str(poly)
    P = permuton_model.load_permuton(spec)
    return {
        'polynomial': str(poly),
        'value': reduction.evaluate_polynomial(
            poly, table.lyndon_assignment(P)),
        'exact': permuton_model.exact_density(p, P),
    }


@command(help='reduction polynomials of every permutation up to a size',
         operations=('build_reduction_table', 'ReductionTable.evaluate'))
def reduction_table(k=(3, 'maximum size'),
                    spec=(None, 'permuton spec file; give densities '
                                'instead of polynomials')):
    table = reduction.build_reduction_table(k)
    if spec is None:
        return table
    P = permuton_model.load_permuton(spec)
    return {str(p): v for p, v in table.evaluate(P).items()}


@command(help='Jacobian of Lyndon densities in the s-variables',
         description='Evaluated at the point in the spec file (JSON object '
                     '{"s[1]": "1/2", "t[1,1]": "1/4", ...}) or at '
                     's[i] = 1/(N+1), t[i,j] = 1/(ni+1).',
         operations=('build_PiL', 'density_in_s_t', 'jacobian_matrix',
                     'jacobian_determinant', 'det_monomial_coefficient',
                     'truncated_determinant',
                     'symbolic_determinant', 'block_monomial_coefficient',
                     'segment_formula', 'uniform_point'))
def jacobian(k=(2, 'maximum pattern size'),
             spec=(None, 'point file'),
             mode=('auto', 'how to differentiate',
                   ['auto', 'symbolic', 'numeric'])):
    if spec is None:
        point = independence.uniform_point(k)
    else:
        point = independence.load_point(spec, k)
    family = independence.pil_family(k)
    matrix = independence.jacobian_matrix(k, point, mode=mode)
    result = {
        'k': k,
        'lyndon_list': list(point.lyndon_list),
        'point': point,
        'permuton': independence.build_PiL(point),
        'matrix': [list(row) for row in matrix],
        'determinant': independence.jacobian_determinant(matrix),
    }
    if k <= 3:
        result['densities'] = {
            str(pi): str(independence.density_in_s_t(pi, k))
            for pi in family.perms}
        result['block_coefficients'] = [{
            'perm': pi,
            'measured': independence.block_monomial_coefficient(i, k),
            'segment_formula': independence.segment_formula(pi),
        } for i, pi in enumerate(family.perms, 1)]
        result['monomial_coefficient'] = \
            independence.det_monomial_coefficient(k)
    if k == 2:
        result['symbolic_determinant'] = \
            str(independence.symbolic_determinant(k))
    return result


@command(help='search a rational point with non-zero Jacobian determinant',
         operations=('find_witness', 'random_point', 'numeric_jacobian',
                     'numeric_determinant', 'recheck_certificate'))
def witness(k=(3, 'maximum pattern size'),
            attempts=(settings.config.witness.attempts, 'points to try'),
            seed=_seed,
            mode=('auto', 'how to differentiate',
                  ['auto', 'symbolic', 'numeric'])):
    certificate = independence.find_witness(k, attempts, seed, mode=mode)
    result = certificate.to_json()
    result['recheck'] = independence.recheck_certificate(certificate)
    return result


@command(help='run the acceptance checks',
         description='With --perms, checks instead that the blocks of a '
                     'strictly >_L-decreasing list of Lyndon permutations '
                     'are the only position sets inducing them.',
         operations=('run_checks', 'verify_lemma_lyndon',
                     'lemma_lyndon_solutions'))
def verify(level=('desk', 'problem sizes', ['desk', 'deep']),
           seed=_seed,
           only=([], 'run only these checks'),
           perms=([], 'Lyndon permutations for the position-set check')):
    if perms:
        parsed = _parse_all(perms)
        return {
            'perms': parsed,
            'solutions': [[list(j) for j in solution] for solution in
                          independence.lemma_lyndon_solutions(parsed)],
            'holds': independence.verify_lemma_lyndon(parsed),
        }
    return run_checks(level, seed, names=only or None)
