# src/analytics/report.py
"""
Relatório de verificação: veredito, métricas escalares e curvas anexas
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict

from .curves import TailCurve

VERDICTS = ('pass', 'fail', 'DivergentIntegral', 'Unresolvable')


def to_jsonable(value: Any) -> Any:
    """Converte valores numpy/não finitos para algo serializável em JSON"""
    if hasattr(value, 'item') and not hasattr(value, '__len__'):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, 'tolist'):
        return to_jsonable(value.tolist())
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    return value


@dataclass
class CheckReport:
    """Resultado de uma verificação numérica"""

    name: str
    verdict: str
    law: str
    d: int
    metrics: Dict[str, Any] = field(default_factory=dict)
    curves: Dict[str, TailCurve] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict '{self.verdict}'")

    @property
    def passed(self) -> bool:
        return self.verdict == 'pass'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'verdict': self.verdict,
            'law': self.law,
            'd': self.d,
            'metrics': to_jsonable(self.metrics),
            'curves': {k: to_jsonable(c.to_records()) for k, c in self.curves.items()},
        }
