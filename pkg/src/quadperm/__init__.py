"""Permutation quadrinomials x^(3*2^m) + a1 x^(2^(m+1)+1) + a2 x^(2^m+2) + a3 x^3 over GF(2^(2m))."""

from .core import (RationalMapCoeffs, ThetaVector, Triple, UndefinedPoint, F_eval, f_eval,
                   gamma_member, is_perm_bruteforce, is_perm_structured, normalize_triple, phi,
                   rational_map_coeffs, theta_of)
from .curve import (CurveClass, CurveCoeffs, FactorizationReport, L_eval, classify,
                    count_rational_zeros, curve_coeffs, hasse_weil_lower_bound,
                    reconstruct_factors)
from .gf2field import FieldCtx, FieldError, make_field
from .gf2tower import TowerCtx, make_tower

__version__ = "0.1.0"
