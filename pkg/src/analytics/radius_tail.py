# src/analytics/radius_tail.py
"""
Cauda do raio da cobertura no sítio central contra a probabilidade de buraco
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import Unresolvable
from core.trial_pool import TrialPool
from cover import cover_trial
from process import PerturbationLaw, trial_seeds
from .curves import TailCurve
from .hole import hole_curve
from .report import CheckReport

logger = logging.getLogger(__name__)


def center_radius(seed: int, law: PerturbationLaw, L: int,
                  margin: Optional[int] = None) -> Tuple[float, float]:
    """(R⁰, R) no sítio 0 de uma janela amostrada com a semente dada"""
    _, fields = cover_trial(law, L, seed, margin=margin)
    row = int(fields.index_of(np.zeros(fields.d, dtype=np.int64)))
    return float(fields.R0[row]), float(fields.R[row])


def radius_tail_vs_hole(law: PerturbationLaw, L: int, trials: int, r_grid: Sequence[float],
                        seed: int, workers: Optional[int] = None,
                        margin: Optional[int] = None) -> CheckReport:
    """
    ℙ̂(R > r) no centro e c* = min_r log ℙ̂(R > r) / log h(r)

    Passa sse c* > 0 e ℙ̂(R > r) ≤ h(r)^{c*/2} em todo r resolvido.

    Raises:
        Unresolvable: ℙ̂ = 0 em toda a grade além do primeiro ponto
    """
    seeds = trial_seeds(seed, trials)
    radii = TrialPool(workers).map(center_radius, seeds, law=law, L=L, margin=margin)
    final = np.array([R for _, R in radii])
    initial = np.array([R0 for R0, _ in radii])

    tail = TailCurve.empirical(final, r_grid, law.spec(), law.d, seed=seed)
    initial_tail = TailCurve.empirical(initial, r_grid, law.spec(), law.d, seed=seed)
    curves = {'radius_tail': tail, 'initial_radius_tail': initial_tail}
    metrics = {'trials': int(trials), 'L': int(L), 'max_R': float(final.max())}

    if not law.is_continuous:
        verdict = 'pass' if np.all(tail.value == 0) else 'fail'
        return CheckReport('radius-tail', verdict, law.spec(), law.d, metrics, curves)

    if len(tail) > 1 and np.all(tail.value[1:] == 0):
        raise Unresolvable(
            f"empirical radius tail vanishes beyond r={tail.r[0]:g} in {trials} trials",
            trials=int(trials), r=[float(x) for x in tail.r]
        )

    holes = hole_curve(law, r_grid)
    curves['log_h'] = holes
    with np.errstate(divide='ignore'):
        log_tail = np.log(tail.value)
    resolvable = (tail.value > 0) & np.isfinite(holes.value) & (holes.value < 0)
    if not np.any(resolvable):
        raise Unresolvable("no grid point resolves both the radius tail and h(r)",
                           trials=int(trials))

    ratios = log_tail[resolvable] / holes.value[resolvable]
    c_star = float(np.min(ratios))
    below = bool(np.all(log_tail[resolvable] <= 0.5 * c_star * holes.value[resolvable]))
    verdict = 'pass' if c_star > 0 and below else 'fail'
    metrics.update(c_star=c_star, ratios=ratios, resolvable_r=tail.r[resolvable],
                   nonincreasing=tail.is_nonincreasing())
    logger.info(f"radius tail: c*={c_star:.4g} over {int(resolvable.sum())} points",
                extra={'seed': seed})
    if not math.isfinite(c_star):
        verdict = 'fail'
    return CheckReport('radius-tail', verdict, law.spec(), law.d, metrics, curves)
