# src/matching/__init__.py
"""
Emparelhamento sítio → ponto sobre as vizinhanças da cobertura
"""

from .bipartite import NIL, BipartiteGraph, HopcroftKarp, maximum_matching
from .result import METHODS, MatchResult
from .cover_matching import (
    canonical_matching,
    distance_bound_holds,
    labels_by_box,
    match_window,
    maximum_region_matching,
    neighborhood,
    region_bounds,
    region_candidates,
)
from .hall import hall_check_bruteforce
from .tail import MatchTailReport, center_statistics, match_tail_curve

__all__ = [
    'NIL',
    'BipartiteGraph',
    'HopcroftKarp',
    'maximum_matching',
    'METHODS',
    'MatchResult',
    'canonical_matching',
    'distance_bound_holds',
    'labels_by_box',
    'match_window',
    'maximum_region_matching',
    'neighborhood',
    'region_bounds',
    'region_candidates',
    'hall_check_bruteforce',
    'MatchTailReport',
    'center_statistics',
    'match_tail_curve',
]
