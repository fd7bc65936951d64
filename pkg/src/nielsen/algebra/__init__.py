"""Exact scalars (``fractions.Fraction``), matrices, polynomials, rational functions and certified roots."""

from .matrix import QMatrix, as_fraction, companion, det, direct_sum, exterior_power, mat_pow
from .poly import (QPoly, char_poly, format_poly, poly_gcd, poly_xgcd, inverse_mod, power_sums,
                   powered_roots_poly, squarefree_decomposition, squarefree_part)
from .ratfunc import (QRationalFunction, format_ratfunc, parse_ratfunc, series_div, series_exp,
                      zeta_series_from_sequence)
from .roots import (ComplexApprox, UnityVerdict, certify_real, is_root_of_unity_ratio, poly_roots,
                    poly_roots_with_multiplicity, root_of_unity_order)

__all__ = [
    "QMatrix", "as_fraction", "companion", "det", "direct_sum", "exterior_power", "mat_pow",
    "QPoly", "char_poly", "format_poly", "poly_gcd", "poly_xgcd", "inverse_mod", "power_sums",
    "powered_roots_poly", "squarefree_decomposition", "squarefree_part",
    "QRationalFunction", "format_ratfunc", "parse_ratfunc", "series_div", "series_exp",
    "zeta_series_from_sequence",
    "ComplexApprox", "UnityVerdict", "certify_real", "is_root_of_unity_ratio", "poly_roots",
    "poly_roots_with_multiplicity", "root_of_unity_order",
]
