# src/analytics/__init__.py
"""
Probabilidades de buraco, validadores de hipóteses, cauda do raio da
cobertura, regressões e exportação de curvas
"""

from .curves import TailCurve
from .report import CheckReport, to_jsonable
from .regression import LogLogFit, envelope_constant, fit_loglog
from .hole import (
    CountVariance,
    HoleResult,
    MonteCarloEstimate,
    count_variance_exact,
    hole_bounds_check,
    hole_curve,
    hole_probability_exact,
    hole_probability_mc,
    reach_radius,
    remark_bound_curve,
)
from .assumptions import assumption_int_check, assumption_reg_check
from .radius_tail import center_radius, radius_tail_vs_hole
from .export import (
    read_table_csv,
    read_tail_csv,
    write_report,
    write_table_csv,
    write_tail_csv,
)

__all__ = [
    'TailCurve',
    'CheckReport',
    'to_jsonable',
    'LogLogFit',
    'envelope_constant',
    'fit_loglog',
    'CountVariance',
    'HoleResult',
    'MonteCarloEstimate',
    'count_variance_exact',
    'hole_bounds_check',
    'hole_curve',
    'hole_probability_exact',
    'hole_probability_mc',
    'reach_radius',
    'remark_bound_curve',
    'assumption_int_check',
    'assumption_reg_check',
    'center_radius',
    'radius_tail_vs_hole',
    'read_table_csv',
    'read_tail_csv',
    'write_report',
    'write_table_csv',
    'write_tail_csv',
]
