# src/analytics/assumptions.py
"""
Validadores das hipóteses de cauda

- integrabilidade: ∫_r^∞ p(t) dt ≤ C·r·p(r)
- regularidade: sup_r log p(kr) / log p(r) < ∞ para cada k ≥ 1
"""

import logging
from typing import Sequence

import numpy as np

from core.errors import DivergentMean
from process import PerturbationLaw
from .report import CheckReport

logger = logging.getLogger(__name__)

DEFAULT_K = (2, 3)
# Crescimento máximo aceito da razão entre as metades da grade
GROWTH_CAP = 2.0
# Variação máxima aceita do supremo quando a grade é refinada
REFINEMENT_CAP = 1.25


def assumption_int_check(law: PerturbationLaw, r_grid: Sequence[float]) -> CheckReport:
    """
    Razão ∫_r^∞ p / (r·p(r)) na grade

    Passa sse todas as razões são finitas e a metade superior da grade não
    cresce mais que GROWTH_CAP vezes o máximo da metade inferior. Leis com
    média infinita recebem o veredito DivergentIntegral.
    """
    r = np.asarray(r_grid, dtype=np.float64)
    try:
        integrals = np.array([law.tail_integral(x) for x in r])
    except DivergentMean as exc:
        logger.info(f"integrability check: {exc.message}")
        return CheckReport('assumption-int', 'DivergentIntegral', law.spec(), law.d,
                           {'reason': exc.message})

    scale = r * np.asarray(law.tail_probability(r), dtype=np.float64)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(scale > 0, integrals / scale, np.where(integrals > 0, np.inf, 0.0))

    verdict = 'fail'
    if np.all(np.isfinite(ratio)):
        half = max(1, len(ratio) // 2)
        lower = float(np.max(ratio[:half]))
        upper = float(np.max(ratio[half:])) if len(ratio) > half else lower
        if upper <= GROWTH_CAP * max(lower, np.finfo(float).tiny):
            verdict = 'pass'
    return CheckReport('assumption-int', verdict, law.spec(), law.d,
                       {'r': r, 'ratio': ratio, 'max_ratio': float(np.max(ratio))})


def _regularity_ratios(law: PerturbationLaw, k: float, r: np.ndarray) -> np.ndarray:
    log_r = np.asarray(law.log_tail_probability(r), dtype=np.float64)
    log_kr = np.asarray(law.log_tail_probability(k * r), dtype=np.float64)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = log_kr / log_r
    # p(r) = 1 não restringe nada
    return ratio[log_r < 0]


def _refined(r: np.ndarray) -> np.ndarray:
    mids = np.sqrt(r[1:] * r[:-1])
    return np.sort(np.concatenate([r, mids]))


def assumption_reg_check(law: PerturbationLaw, k_list: Sequence[float] = DEFAULT_K,
                         r_grid: Sequence[float] = (1.0, 2.0, 4.0, 8.0, 16.0)) -> CheckReport:
    """
    max_r log p(kr) / log p(r) por k, na grade e na grade refinada

    Passa sse todos os máximos são finitos e o refinamento os altera por no
    máximo REFINEMENT_CAP.
    """
    r = np.asarray(r_grid, dtype=np.float64)
    r = r[r >= 1.0]
    per_k = {}
    verdict = 'pass'
    for k in k_list:
        coarse = _regularity_ratios(law, float(k), r)
        fine = _regularity_ratios(law, float(k), _refined(r)) if r.size > 1 else coarse
        if coarse.size == 0 or not (np.all(np.isfinite(coarse)) and np.all(np.isfinite(fine))):
            per_k[str(k)] = {'max_ratio': float('inf'), 'refined_max_ratio': float('inf')}
            verdict = 'fail'
            continue
        coarse_max = float(np.max(coarse))
        fine_max = float(np.max(fine))
        per_k[str(k)] = {'max_ratio': coarse_max, 'refined_max_ratio': fine_max}
        if fine_max > REFINEMENT_CAP * coarse_max:
            verdict = 'fail'
    return CheckReport('assumption-reg', verdict, law.spec(), law.d, {'k': per_k, 'r': r})
