"""Executable acceptance checks, run by ``lynperm verify``.

Each check returns a :class:`CheckResult`; :func:`run_checks` runs them in
order at one of two levels. ``desk`` finishes in minutes, ``deep`` raises
the exhaustive sizes and adds the ``k=4`` certificate.
"""
import itertools
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .common import LynpermError, PreconditionError, VerificationError
from .flag_calc import (constituents_violating_flag_lemma, density_of_sum,
                        flag_product)
from .independence import (density_in_s_t, det_monomial_coefficient,
                           find_witness, jacobian_determinant,
                           jacobian_matrix, pil_family, PiLSpec,
                           recheck_certificate, symbolic_determinant,
                           verify_lemma_lyndon)
from .lyndon_alg import (BlockWord, enumerate_lyndon_permutations,
                         is_lyndon_word, lyndon_counts_from_series,
                         lyndon_key, lyndon_size_counts,
                         max_shuffle_constituent, reverse_alphabet_key)
from .perm_core import enumerate_permutations, parse_permutation
from .permuton_model import (estimate_density, exact_density, make_blowup,
                             random_blowup)
from .polynomial import Variable
from .reduction import build_reduction_table

logger = logging.getLogger(__name__)

LEVELS = {
    'desk': {'product_total': 5, 'lemma_total': 7, 'witness_ks': (3,)},
    'deep': {'product_total': 6, 'lemma_total': 8, 'witness_ks': (3, 4)},
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    detail: str = ''
    seconds: float = 0.0

    def to_json(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'checked': self.checked,
            'detail': self.detail,
            'seconds': round(self.seconds, 3),
        }


def _perm(text):
    return parse_permutation(text)


def _perms(texts):
    return [parse_permutation(t) for t in texts.split()]


def _random_permutons(seed, count=20, max_base_size=5, max_denominator=64):
    rng = np.random.default_rng(seed)
    return [random_blowup(rng, max_base_size, max_denominator)
            for _ in range(count)]


def check_lyndon_enumeration(seed=0, **kwargs):
    k2 = enumerate_lyndon_permutations(2)
    k3 = enumerate_lyndon_permutations(3, include_trivial=True)
    expected = _perms('321 312 231 21 132 1')
    ok = k2 == [_perm('21')] and k3 == expected
    return ok, 2, 'P^L_3 = %s' % ' '.join(map(str, k3))


def check_series_identity(seed=0, **kwargs):
    series = lyndon_counts_from_series(6)
    counted = lyndon_size_counts(6)
    reverse = lyndon_size_counts(5, reverse_alphabet_key)
    ok = (series == counted and series[:4] == [1, 1, 4, 17]
          and reverse == counted[:5])
    return ok, 6, 'l = %s, enumerated %s' % (series, counted)


def check_flag_example(seed=0, **kwargs):
    product = flag_product(_perms('12 1'))
    expected = {
        _perm('123'): Fraction(1),
        _perm('132'): Fraction(2, 3),
        _perm('231'): Fraction(1, 3),
        _perm('213'): Fraction(2, 3),
        _perm('312'): Fraction(1, 3),
    }
    return dict(product) == expected, 1, '12 x 1 = %s' % product


def _multisets(total):
    """Lists of at least two permutations, non-decreasing by index, with
    sizes summing to at most ``total``."""
    pool = [p for n in range(1, total) for p in enumerate_permutations(n)]

    def grow(start, remaining, chosen):
        if len(chosen) >= 2:
            yield list(chosen)
        for i in range(start, len(pool)):
            if len(pool[i]) <= remaining:
                chosen.append(pool[i])
                yield from grow(i, remaining - len(pool[i]), chosen)
                chosen.pop()

    yield from grow(0, total, [])


def check_product_identity(seed=0, product_total=5, **kwargs):
    permutons = _random_permutons(seed)
    checked = 0
    for parts in _multisets(product_total):
        product = flag_product(parts)
        for P in permutons:
            lhs = density_of_sum(product, P)
            rhs = math.prod((exact_density(p, P) for p in parts),
                            start=Fraction(1))
            if lhs != rhs:
                return False, checked, 'd(%s) = %s but the product is %s' % (
                    ' x '.join(map(str, parts)), lhs, rhs)
            checked += 1
    return True, checked, ''


def _lyndon_word_lists(letters, total):
    words = [BlockWord._trusted(w) for n in range(1, total + 1)
             for w in itertools.product(letters, repeat=n)]
    words = sorted((w for w in words if is_lyndon_word(w)), reverse=True)

    def grow(start, remaining, chosen):
        if chosen:
            yield list(chosen)
        for i in range(start, len(words)):
            if len(words[i]) <= remaining:
                chosen.append(words[i])
                yield from grow(i, remaining - len(words[i]), chosen)
                chosen.pop()

    yield from grow(0, total, [])


def check_flag_lemmas(seed=0, **kwargs):
    letters = _perms('1 21 231 312 321')
    checked = 0
    for words in _lyndon_word_lists(letters, 5):
        top, coeff = max_shuffle_constituent(words)
        concatenation = words[0]
        for w in words[1:]:
            concatenation = concatenation + w
        distinct = len(set(words)) == len(words)
        if top != concatenation or (distinct and coeff != 1):
            return False, checked, 'largest term of %s is %s (x%d)' % (
                ' (x) '.join(map(str, words)), top, coeff)
        checked += 1
    for n in range(1, 6):
        for pi in enumerate_permutations(n):
            violating = constituents_violating_flag_lemma(pi)
            if violating:
                return False, checked, '%s has constituents %s' % (
                    pi, ' '.join(map(str, violating)))
            checked += 1
    return True, checked, ''


def check_reduction_round_trip(seed=0, **kwargs):
    table = build_reduction_table(4)
    anchors = {
        '12': '1 - x[21]',
        '213': '3*x[21] - x[132] - 2*x[231] - 2*x[312] - 3*x[321]',
    }
    for text, rendering in anchors.items():
        if str(table[_perm(text)]) != rendering:
            return False, 0, 'p_%s = %s' % (text, table[_perm(text)])
    checked = 0
    for P in _random_permutons(seed):
        values = table.evaluate(P)
        for pi, value in values.items():
            if value != exact_density(pi, P):
                return False, checked, 'p_%s gives %s on %s' % (
                    pi, value, P.to_json())
            checked += 1
    return True, checked, ''


def lyndon_tuples(total, max_size=None):
    """Strictly ``>_L``-decreasing tuples of Lyndon permutations with
    sizes summing to at most ``total``."""
    pool = sorted(enumerate_lyndon_permutations(total, include_trivial=True,
                                                max_size=max_size),
                  key=lyndon_key, reverse=True)

    def grow(start, remaining, chosen):
        if chosen:
            yield list(chosen)
        for i in range(start, len(pool)):
            if len(pool[i]) <= remaining:
                chosen.append(pool[i])
                yield from grow(i + 1, remaining - len(pool[i]), chosen)
                chosen.pop()

    yield from grow(0, total, [])


def check_lemma_lyndon(seed=0, lemma_total=7, **kwargs):
    checked = 0
    for perms in lyndon_tuples(lemma_total, max_size=lemma_total):
        if not verify_lemma_lyndon(perms, max_size=lemma_total):
            return False, checked, 'extra solutions for %s' % (
                ' '.join(map(str, perms)))
        checked += 1
    return True, checked, ''


def check_certificate(seed=0, witness_ks=(3,), **kwargs):
    det = symbolic_determinant(2)
    s1, t11, t12 = Variable.s(1), Variable.t(1, 1), Variable.t(1, 2)
    ring = pil_family(2).ring
    expected = ring.gen(s1) * ring.gen(t11) * ring.gen(t12) * 4
    if det != expected or det_monomial_coefficient(2) != 4:
        return False, 0, 'det for k=2 is %s' % det
    point = PiLSpec(2, (Fraction(1, 2),), ((Fraction(1, 4),) * 2,))
    if jacobian_determinant(jacobian_matrix(2, point)) != Fraction(1, 8):
        return False, 1, 'det at (1/2, 1/4, 1/4) is not 1/8'
    details = []
    for k in witness_ks:
        certificate = find_witness(k, seed=seed)
        recheck = recheck_certificate(certificate)
        details.append('k=%d det=%s (float error %.1e)'
                       % (k, certificate.determinant,
                          recheck['relative_error']))
    details.append('k=3 coefficient %s' % det_monomial_coefficient(3))
    return True, 3 + len(witness_ks), '; '.join(details)


def _monte_carlo_battery(seed):
    halves = make_blowup(_perm('21'), ['1/2', '1/2'])
    figure = make_blowup(_perm('42315'), ['2/5', '1/5', '1/10', '1/10',
                                          '1/5'])
    battery = [
        (_perm('21'), halves),
        (_perm('12'), halves),
        (_perm('1'), halves),
        (_perm('321'), halves),
        (_perm('231'), figure),
        (_perm('2413'), figure),
    ]
    rng = np.random.default_rng(seed)
    while len(battery) < 10:
        P = random_blowup(rng)
        perms = enumerate_permutations(int(rng.integers(2, 4)))
        battery.append((perms[int(rng.integers(0, len(perms)))], P))
    return battery


def check_monte_carlo(seed=0, trials=100000, **kwargs):
    misses = []
    battery = _monte_carlo_battery(seed)
    for i, (sigma, P) in enumerate(battery):
        exact = exact_density(sigma, P)
        estimate = estimate_density(sigma, P, trials, seed=seed + i)
        if estimate.standard_error == 0:
            ok = estimate.mean == float(exact)
        else:
            ok = abs(estimate.mean - float(exact)) <= \
                4 * estimate.standard_error
        if not ok:
            misses.append('%s: %.4f vs %s' % (sigma, estimate.mean, exact))
    return len(misses) <= 1, len(battery), '; '.join(misses)


def check_homogeneity(seed=0, **kwargs):
    checked = 0
    for k in (2, 3):
        family = pil_family(k)
        for pi in family.perms:
            poly = density_in_s_t(pi, k)
            n = len(pi)
            if poly.degrees({'s'}) != {n} or poly.degrees({'t'}) != {n}:
                return False, checked, 'd(%s) for k=%d' % (pi, k)
            checked += 1
    family = pil_family(2)
    degree = symbolic_determinant(2).degree()
    if degree != 2 * sum(family.sizes) - family.N:
        return False, checked, 'det for k=2 has degree %d' % degree
    return True, checked + 1, ''


CHECKS = [
    ('lyndon-enumeration', check_lyndon_enumeration),
    ('series-identity', check_series_identity),
    ('flag-product-example', check_flag_example),
    ('product-identity', check_product_identity),
    ('shuffle-and-flag-lemmas', check_flag_lemmas),
    ('reduction-round-trip', check_reduction_round_trip),
    ('lyndon-interval-lemma', check_lemma_lyndon),
    ('jacobian-certificate', check_certificate),
    ('monte-carlo-oracle', check_monte_carlo),
    ('homogeneity', check_homogeneity),
]


def run_check(name, f, seed=0, **params):
    start = time.perf_counter()
    try:
        passed, checked, detail = f(seed=seed, **params)
    except LynpermError as e:
        passed, checked, detail = False, 0, '%s: %s' % (type(e).__name__, e)
    result = CheckResult(name, passed, checked, detail,
                         time.perf_counter() - start)
    logger.info('%s %s (%d checked, %.1fs)%s', name,
                'passed' if passed else 'FAILED', checked, result.seconds,
                ': ' + detail if detail else '')
    return result


def run_checks(level='desk', seed=0, names=None, raise_on_failure=True):
    """Run the acceptance checks and return their results.

    Args:
        level (str): ``desk`` or ``deep``
        names (list): only run these checks
        raise_on_failure (bool): raise :class:`VerificationError` naming the
                                 failed checks
    """
    if level not in LEVELS:
        raise PreconditionError('unknown level %r' % level)
    params = LEVELS[level]
    unknown = set(names or ()) - {name for name, _ in CHECKS}
    if unknown:
        raise PreconditionError('unknown checks: %s'
                                % ', '.join(sorted(unknown)))
    results = [run_check(name, f, seed=seed, **params)
               for name, f in CHECKS if names is None or name in names]
    failed = [r.name for r in results if not r.passed]
    if failed and raise_on_failure:
        raise VerificationError('failed checks: %s' % ', '.join(failed))
    return results
