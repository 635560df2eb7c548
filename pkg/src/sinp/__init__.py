"""Generalised trigonometric functions sin_p, cos_p and the constant pi_p.

Typical use::

    from sinp import make_context, run_inverse_power, PTrig, sin_p
    ctx = make_context(3.0)
    trig = PTrig(run_inverse_power(ctx))
    sin_p(trig, 1.0)
"""

from .checks import CheckResult, iterate_checks, run_checks, table_checks
from .core import (DEFAULT_NODES, GridFunction, PContext, grid_nodes, lambda_1, make_context,
                   make_grid, phi_1_closed_form, pi_p_quadrature, psi, psi_inv)
from .errors import DomainError, NonConvergenceError, QuadratureError, RootError, ShapeError
from .extension import PTrig, cos_p, reduce_argument, sin_p
from .methods import (METHODS, IterationTrace, MethodReport, SinPTable, arcsin_p, compare_methods,
                      inverse_power_iterates, inverse_power_step, run_inverse_power, run_method,
                      run_ode, run_zeta_inverse)
from .quadrature import (CumulativeIntegral, cumulative, integrate_singular, product_cumulative,
                         product_tail, simpson, tail)

__all__ = [
    "CheckResult", "iterate_checks", "run_checks", "table_checks",
    "DEFAULT_NODES", "GridFunction", "PContext", "grid_nodes", "lambda_1", "make_context",
    "make_grid", "phi_1_closed_form", "pi_p_quadrature", "psi", "psi_inv",
    "DomainError", "NonConvergenceError", "QuadratureError", "RootError", "ShapeError",
    "PTrig", "cos_p", "reduce_argument", "sin_p",
    "METHODS", "IterationTrace", "MethodReport", "SinPTable", "arcsin_p", "compare_methods",
    "inverse_power_iterates", "inverse_power_step", "run_inverse_power", "run_method",
    "run_ode", "run_zeta_inverse",
    "CumulativeIntegral", "cumulative", "integrate_singular", "product_cumulative",
    "product_tail", "simpson", "tail",
]
