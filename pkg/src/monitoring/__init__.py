# src/monitoring/__init__.py
"""
Monitoring and metrics module
"""

from .metrics import TrialMetricsCollector, track_latency

__all__ = ['TrialMetricsCollector', 'track_latency']
