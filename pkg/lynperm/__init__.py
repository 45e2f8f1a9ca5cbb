from .common import command, argspec, LynpermError
from .perm_core import Permutation, parse_permutation, direct_sum
from .lyndon_alg import BlockWord, is_lyndon_permutation
from .flag_calc import PermSum, flag_product
from .permuton_model import BlowupPermuton, make_blowup, exact_density
from .reduction import build_reduction_table, reduce_to_lyndon

__all__ = [
    'command', 'argspec', 'LynpermError',
    'Permutation', 'parse_permutation', 'direct_sum',
    'BlockWord', 'is_lyndon_permutation',
    'PermSum', 'flag_product',
    'BlowupPermuton', 'make_blowup', 'exact_density',
    'build_reduction_table', 'reduce_to_lyndon',
]

__version__ = '0.1.0'
