# src/geometry/__init__.py
"""
Utilitários geométricos: métrica ℓ∞, caixas diádicas e slab clipping
"""

from .metric import linf_distance, linf_norm
from .boxes import (
    DyadicBox,
    enclosing_box,
    box_contains,
    box_touches,
    lattice_sites,
    segment_intersects_box,
    segments_intersect_box,
)

__all__ = [
    'linf_distance',
    'linf_norm',
    'DyadicBox',
    'enclosing_box',
    'box_contains',
    'box_touches',
    'lattice_sites',
    'segment_intersects_box',
    'segments_intersect_box',
]
