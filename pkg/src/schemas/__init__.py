# src/schemas/__init__.py
"""
Data schemas and validation models
"""

from .data_models import (
    Subcommand,
    Verdict,
    LawSpec,
    ExperimentConfig,
    TailPoint,
    VerdictReport,
    ErrorRecord,
    parse_grid,
    generate_json_schemas,
    save_schemas_to_file
)

__all__ = [
    'Subcommand',
    'Verdict',
    'LawSpec',
    'ExperimentConfig',
    'TailPoint',
    'VerdictReport',
    'ErrorRecord',
    'parse_grid',
    'generate_json_schemas',
    'save_schemas_to_file'
]
