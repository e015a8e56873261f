# src/analytics/curves.py
"""
Curvas de cauda (r, valor, erro padrão) com metadados de proveniência
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from core.errors import ValidationError

logger = logging.getLogger(__name__)

ESTIMATORS = ('exact', 'monte-carlo')

# probability: valores em [0, 1]; log: valores ≤ 0 (log de probabilidade);
# value: grandeza real qualquer (variâncias, médias normalizadas)
QUANTITIES = ('probability', 'log', 'value')


def _as_float_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TailCurve:
    """
    Curva ordenada por r com erro padrão por ponto

    Curvas exatas têm stderr ≡ 0; curvas Monte Carlo registram o número
    de tentativas e a semente mestre.
    """

    r: np.ndarray
    value: np.ndarray
    stderr: np.ndarray
    estimator: str
    law: str
    d: int
    trials: int = 0
    seed: Optional[int] = None
    quantity: str = 'probability'
    meta: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        r = _as_float_array(self.r)
        value = _as_float_array(self.value)
        stderr = _as_float_array(np.zeros_like(value) if self.stderr is None else self.stderr)
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'value', value)
        object.__setattr__(self, 'stderr', stderr)

        if self.estimator not in ESTIMATORS:
            raise ValidationError(f"unknown estimator '{self.estimator}'", estimator=self.estimator)
        if self.quantity not in QUANTITIES:
            raise ValidationError(f"unknown curve quantity '{self.quantity}'")
        if not (r.shape == value.shape == stderr.shape):
            raise ValidationError("r, value and stderr must have the same length",
                                  lengths=[len(r), len(value), len(stderr)])
        if r.size > 1 and np.any(np.diff(r) <= 0):
            raise ValidationError("curve abscissae must be strictly increasing")
        if self.estimator == 'exact' and np.any(stderr != 0):
            raise ValidationError("exact curves carry zero standard error")
        if self.quantity == 'probability' and np.any((value < 0) | (value > 1)):
            raise ValidationError("probability curve outside [0, 1]")
        if self.quantity == 'log' and np.any(value > 0):
            raise ValidationError("log-probability curve must be <= 0")

    def __len__(self) -> int:
        return int(self.r.size)

    @property
    def is_exact(self) -> bool:
        return self.estimator == 'exact'

    def resolvable(self) -> np.ndarray:
        """Pontos com valor estritamente positivo (probabilidades) ou finito (log)"""
        if self.quantity == 'log':
            return np.isfinite(self.value)
        return self.value > 0

    def is_nonincreasing(self, slack: float = 0.0) -> bool:
        return bool(np.all(np.diff(self.value) <= slack))

    def to_records(self) -> List[dict]:
        return [
            {'r': float(r), 'value': float(v), 'stderr': float(s)}
            for r, v, s in zip(self.r, self.value, self.stderr)
        ]

    # ============================================
    # CONSTRUTORES
    # ============================================

    @classmethod
    def exact(cls, r_grid: Sequence[float], values: Sequence[float], law: str, d: int,
              quantity: str = 'probability', **meta: str) -> 'TailCurve':
        r = np.asarray(r_grid, dtype=np.float64)
        return cls(r, values, np.zeros_like(r), 'exact', law, int(d),
                   quantity=quantity, meta=dict(meta))

    @classmethod
    def empirical(cls, samples, r_grid: Sequence[float], law: str, d: int,
                  seed: Optional[int] = None, strict: bool = True) -> 'TailCurve':
        """
        ℙ̂(X > r) (strict) ou ℙ̂(X ≥ r) com erro binomial √(p̂(1−p̂)/n)

        Amostras NaN (tentativas descartadas) não entram na contagem.
        """
        samples = np.asarray(samples, dtype=np.float64).reshape(-1)
        samples = samples[~np.isnan(samples)]
        n = samples.size
        if n == 0:
            raise ValidationError("empirical tail needs at least one sample")
        r = np.asarray(r_grid, dtype=np.float64)
        ordered = np.sort(samples)
        side = 'right' if strict else 'left'
        counts = n - np.searchsorted(ordered, r, side=side)
        p_hat = counts / n
        stderr = np.sqrt(p_hat * (1.0 - p_hat) / n)
        return cls(r, p_hat, stderr, 'monte-carlo', law, int(d), trials=n, seed=seed)
