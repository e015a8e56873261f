# src/cover/__init__.py
"""
Cobertura regular multiescala: cruzamentos, campos I⁰/I¹/I e verificação
"""

from .crossing import (
    ScaleCounts,
    audit_box,
    crossing_counts,
    crossing_mask,
    crossing_set,
    reach_probability_bound,
)
from .fields import (
    CoverFields,
    assemble_cover,
    build_cover,
    ceil_log2,
    compute_I0,
    cover_trial,
    default_margin,
    scale_cap,
    scale_fields,
    smooth_field,
)
from .verification import (
    CoverReport,
    adjacent_box_pairs,
    box_neighbors,
    verify_cover_properties,
)
from .export import cover_to_dict, save_cover

__all__ = [
    'ScaleCounts',
    'audit_box',
    'crossing_counts',
    'crossing_mask',
    'crossing_set',
    'reach_probability_bound',
    'CoverFields',
    'assemble_cover',
    'build_cover',
    'ceil_log2',
    'compute_I0',
    'cover_trial',
    'default_margin',
    'scale_cap',
    'scale_fields',
    'smooth_field',
    'CoverReport',
    'adjacent_box_pairs',
    'box_neighbors',
    'verify_cover_properties',
    'cover_to_dict',
    'save_cover',
]
