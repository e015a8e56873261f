# src/experiments/__init__.py
"""
Orquestração reprodutível de experimentos: subcomandos, configuração e exportação
"""

from .commands import COMMANDS, Outcome, cover_verify_trial
from .runner import ExperimentRunner, run
from .cli import build_parser, config_from_args, main

__all__ = [
    'COMMANDS',
    'Outcome',
    'cover_verify_trial',
    'ExperimentRunner',
    'run',
    'build_parser',
    'config_from_args',
    'main',
]
