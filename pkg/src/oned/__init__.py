# src/oned/__init__.py
"""
Caso unidimensional: emparelhamento estável guloso, discrepância F(r),
variância de Π[0, t) e diagnóstico de momento
"""

from .stable_matching import StableMatchInstance, greedy_stable_match
from .discrepancy import (
    FAR_FIELD_MODES,
    EscapeBound,
    discrepancy_F,
    discrepancy_path,
    escape_bound_trial,
    escape_set_bound,
    external_arrivals,
    interval_hits,
    max_discrepancy_curve,
)
from .variance import (
    VarianceResult,
    deficit_lower_bound,
    flow_balance,
    variance_curve,
    variance_exact,
)
from .tail import (
    OnedTailReport,
    blocking_pair_count,
    center_match_distance,
    stability_audit,
    tail_curve_M0,
)
from .moments import MOMENT_COLUMNS, MomentCurve, truncated_moment_curve

__all__ = [
    'StableMatchInstance',
    'greedy_stable_match',
    'FAR_FIELD_MODES',
    'EscapeBound',
    'discrepancy_F',
    'discrepancy_path',
    'escape_bound_trial',
    'escape_set_bound',
    'external_arrivals',
    'interval_hits',
    'max_discrepancy_curve',
    'VarianceResult',
    'deficit_lower_bound',
    'flow_balance',
    'variance_curve',
    'variance_exact',
    'OnedTailReport',
    'blocking_pair_count',
    'center_match_distance',
    'stability_audit',
    'tail_curve_M0',
    'MOMENT_COLUMNS',
    'MomentCurve',
    'truncated_moment_curve',
]
