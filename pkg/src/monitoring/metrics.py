# src/monitoring/metrics.py
"""
Metricas de execucao dos experimentos
Conta tentativas, sinalizacoes, retentativas e erros por tipo, e acumula latencia

O resumo vai no cabecalho dos relatorios JSON (campos de tempo nao entram nos dados)
"""

import time
import logging
from typing import Dict, Any, Optional
from datetime import datetime
from threading import Lock
from functools import wraps

logger = logging.getLogger(__name__)


class TrialMetricsCollector:
    """
    Coletor de metricas de uma execucao
    Thread-safe, apenas em memoria
    """

    def __init__(self, subcommand: Optional[str] = None):
        self.subcommand = subcommand
        self._lock = Lock()
        self.reset()

    def reset(self):
        with self._lock:
            self.metrics = {
                'trials_total': 0,
                'trials_success': 0,
                'trials_flagged': 0,
                'retries': 0,
                'errors': {},  # {error_type: count}
                'latency_sum_ms': 0.0,
                'started_at': datetime.now().isoformat(),
            }

    def record_trials(self, count: int, success: Optional[int] = None, flagged: int = 0):
        """Registra um lote de tentativas (success padrao: todas)"""
        with self._lock:
            self.metrics['trials_total'] += int(count)
            self.metrics['trials_success'] += int(count if success is None else success)
            self.metrics['trials_flagged'] += int(flagged)

    def record_retry(self, count: int = 1):
        with self._lock:
            self.metrics['retries'] += int(count)

    def record_error(self, error: BaseException):
        error_type = type(error).__name__
        with self._lock:
            self.metrics['errors'][error_type] = self.metrics['errors'].get(error_type, 0) + 1

    def record_latency(self, latency_ms: float):
        with self._lock:
            self.metrics['latency_sum_ms'] += float(latency_ms)

    def get_summary(self) -> Dict[str, Any]:
        """Resumo agregado das metricas"""
        with self._lock:
            total = self.metrics['trials_total']
            return {
                'subcommand': self.subcommand,
                'trials_total': total,
                'trials_success': self.metrics['trials_success'],
                'trials_flagged': self.metrics['trials_flagged'],
                'success_rate': self.metrics['trials_success'] / total if total else None,
                'retries': self.metrics['retries'],
                'errors': dict(self.metrics['errors']),
                'elapsed_ms': round(self.metrics['latency_sum_ms'], 3),
                'started_at': self.metrics['started_at'],
            }


def track_latency(collector: TrialMetricsCollector, label: str):
    """
    Decorador para rastrear latencia e erros de uma funcao

    Usage:
        @track_latency(collector, 'hole-exact')
        def run(config):
            ...
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            except Exception as e:
                collector.record_error(e)
                logger.error(f"{label} failed after {(time.perf_counter() - start_time) * 1000:.2f}ms: {e}")
                raise
            finally:
                latency_ms = (time.perf_counter() - start_time) * 1000
                collector.record_latency(latency_ms)
                logger.debug(f"{label} completed in {latency_ms:.2f}ms")
        return wrapper
    return decorator
