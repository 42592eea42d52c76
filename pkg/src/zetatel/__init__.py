"""Exact creative telescoping plus a high-precision nested-sum workbench.

The package discovers and verifies telescoping operators and certificates
for hypergeometric terms (and prefix-sum-coupled terms), evaluates
interpolated multiple zeta and t values to hundreds of bits, and ships a
registry of machine-checked identities with a CLI front end (`zt`).
"""

from .errors import (DivergentBoundary, DivergentIndex, DivergentSeries,
                     NotFound, ParseError, PoleError, UnsupportedGrowth,
                     ZetatelError)
from .polys import (MultiPoly, RatFunc, dispersion_set, poly_gcd, poly_lcm,
                    resultant, shift_poly, solve_ansatz)
from .hyperterm import HyperTerm, LinForm, parse_term, render_term
from .telescope import (Certificate, ShiftOperator, TelescopeResult,
                        boundary_term, gosper, gosper_normal, parse_operator,
                        verify_certificate, verify_prefix_sum, wz_check,
                        zeilberger, zeilberger_prefix_sum)
from .numerics import (ExactPiMultiple, MZVIndex, SumConfig, bernoulli,
                       coupled_double_sum, extrapolate_power_law,
                       extrapolate_tail, gamma_value, hyperterm_series_sum,
                       interpolated_nested_sum, polygamma, prefix_g_values,
                       stuffle_expand, zeta_even_coeff, zeta_value)
from .closedform import Expr, ZetaPoly, parse_closed_form
from .registry import (IdentityRecord, VerificationReport, lookup, registry,
                       registry_text, verify_all, verify_identity)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
