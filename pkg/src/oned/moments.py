# src/oned/moments.py
"""
Diagnóstico de divergência de momento: 𝔼[|M(0)| ∧ t] / t^{(1−α)/2}

Curva limitada inferiormente por constante positiva é compatível com
𝔼[|M(0)|^{(1+α)/2}] = ∞; momento finito força a curva a tender a zero.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from core.errors import DegenerateFit, ValidationError
from analytics import fit_loglog

logger = logging.getLogger(__name__)

MOMENT_COLUMNS = ('t', 'normalized_mean', 'ci_lo', 'ci_hi')
VERDICTS = ('bounded below', 'decaying to 0')
DEFAULT_BOOTSTRAP = 200
# Inclinação log-log abaixo da qual a curva é considerada decrescente
DECAY_SLOPE = -0.1


@dataclass(frozen=True, eq=False)
class MomentCurve:
    t: np.ndarray
    normalized_mean: np.ndarray
    ci_lo: np.ndarray
    ci_hi: np.ndarray
    alpha: float
    n_samples: int
    n_boot: int
    level: float
    slope: Optional[float]
    verdict: str

    def rows(self) -> List[list]:
        return [list(row) for row in zip(self.t.tolist(), self.normalized_mean.tolist(),
                                         self.ci_lo.tolist(), self.ci_hi.tolist())]

    def to_dict(self) -> dict:
        return {
            'alpha': self.alpha,
            'n_samples': self.n_samples,
            'n_boot': self.n_boot,
            'level': self.level,
            'slope': self.slope,
            'verdict': self.verdict,
        }


def _verdict(t: np.ndarray, mean: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    if np.all(hi == 0):
        return None, 'decaying to 0'
    slope = None
    try:
        slope = fit_loglog((t, mean), 'log').slope
    except DegenerateFit:
        pass
    if slope is not None and hi[-1] < lo[0] and slope < DECAY_SLOPE:
        return slope, 'decaying to 0'
    if lo.min() > 0:
        return slope, 'bounded below'
    return slope, 'decaying to 0'


def truncated_moment_curve(samples, alpha: float, t_grid: Sequence[float],
                           n_boot: int = DEFAULT_BOOTSTRAP, seed: int = 0,
                           level: float = 0.95) -> MomentCurve:
    """
    Média truncada normalizada com bandas bootstrap percentis

    Cada réplica bootstrap é um vetor de pesos multinomiais sobre as
    amostras; amostras NaN são descartadas.

    Raises:
        ValidationError: α fora de (0, 1), grade vazia ou sem amostras
    """
    if not 0 < alpha < 1:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}", alpha=alpha)
    if not 0 < level < 1:
        raise ValidationError(f"confidence level must lie in (0, 1), got {level}")
    samples = np.asarray(samples, dtype=np.float64).reshape(-1)
    samples = np.abs(samples[~np.isnan(samples)])
    t = np.asarray(sorted(float(x) for x in t_grid), dtype=np.float64)
    if samples.size == 0 or t.size == 0 or np.any(t <= 0):
        raise ValidationError("moment curve needs samples and a positive t grid",
                              samples=int(samples.size), grid=t.tolist())

    n = samples.size
    norm = t ** ((1.0 - alpha) / 2.0)
    truncated = np.minimum(samples[:, None], t[None, :])
    mean = truncated.mean(axis=0) / norm

    rng = np.random.default_rng(seed)
    weights = rng.multinomial(n, np.full(n, 1.0 / n), size=n_boot).astype(np.float64)
    boot = (weights @ truncated) / n / norm
    tail = 0.5 * (1.0 - level)
    lo, hi = np.quantile(boot, [tail, 1.0 - tail], axis=0)

    slope, verdict = _verdict(t, mean, lo, hi)
    logger.info(f"truncated moment verdict '{verdict}' over t in [{t[0]:g}, {t[-1]:g}]",
                extra={'seed': seed})
    return MomentCurve(t, mean, lo, hi, float(alpha), int(n), int(n_boot), float(level),
                       slope, verdict)
