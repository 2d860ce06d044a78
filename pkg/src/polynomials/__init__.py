"""
Polynomials Module

Mixed polynomials f(z, z̄), the text grammar, homogeneous forms and the
closed-form invariants beta and rho.
"""

from .mixed_poly import MixedPoly, real_jacobian
from .parser import parse, parse_homogeneous, format_poly
from .homogeneous import (
    HomFactorization,
    Homogenization,
    factor_form,
    beta,
    rho,
    homogenize,
    dehomogenize,
)

__all__ = [
    'MixedPoly', 'real_jacobian', 'parse', 'parse_homogeneous', 'format_poly',
    'HomFactorization', 'Homogenization', 'factor_form', 'beta', 'rho',
    'homogenize', 'dehomogenize',
]
