# src/matching/tail.py
"""
Cauda de ‖M(0)‖∞ no sítio central, uma janela independente por tentativa
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from analytics import TailCurve, hole_curve
from core.trial_pool import TrialPool
from cover import cover_trial, default_margin, verify_cover_properties
from process import PerturbationLaw, trial_seeds
from .cover_matching import distance_bound_holds, match_window

logger = logging.getLogger(__name__)


@dataclass
class MatchTailReport:
    """Curvas da cobertura, da linha de base canônica e exatas (p e log h)"""

    cover_tail: TailCurve
    canonical_tail: TailCurve
    exact_tail: TailCurve
    hole: Optional[TailCurve]
    summary: Dict[str, float] = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return (self.summary.get('cover_failures', 0) == 0
                and self.summary.get('distance_failures', 0) == 0)

    def curves(self) -> Dict[str, TailCurve]:
        out = {'cover': self.cover_tail, 'canonical': self.canonical_tail, 'exact_p': self.exact_tail}
        if self.hole is not None:
            out['log_h'] = self.hole
        return out


def center_statistics(seed: int, law: PerturbationLaw, L: int,
                      margin: Optional[int] = None) -> Dict[str, float]:
    """
    Uma tentativa: cobertura, verificação, emparelhamento e as distâncias no centro

    Raises:
        MarginInsufficient: margem insuficiente mesmo após as duplicações
        InteriorUnsaturated: sítio do interior profundo sem par
    """
    realization, fields = cover_trial(law, L, seed, margin=margin)
    report = verify_cover_properties(realization, fields)
    result = match_window(realization, fields)

    origin = np.zeros(realization.d, dtype=np.int64)
    row = int(fields.index_of(origin))
    canonical = float(np.max(np.abs(realization.point(origin))))
    return {
        'distance': result.distance_of(origin),
        'canonical': canonical,
        'R0': float(fields.R0[row]),
        'R': float(fields.R[row]),
        'cover_ok': bool(report.all_ok),
        'distance_ok': distance_bound_holds(result, fields),
        'margin': int(realization.margin),
    }


def match_tail_curve(law: PerturbationLaw, L: int, trials: int, r_grid: Sequence[float],
                     seed: int, workers: Optional[int] = None,
                     margin: Optional[int] = None, with_hole: bool = True) -> MatchTailReport:
    """
    ℙ̂(‖M(0)‖∞ ≥ r) da cobertura, ℙ̂(‖ξ_0‖∞ ≥ r) canônica e p(r) exato
    """
    seeds = trial_seeds(seed, trials)
    stats = TrialPool(workers).map(center_statistics, seeds, law=law, L=L, margin=margin)

    distances = np.array([s['distance'] for s in stats])
    canonical = np.array([s['canonical'] for s in stats])
    cover_tail = TailCurve.empirical(distances, r_grid, law.spec(), law.d, seed=seed, strict=False)
    canonical_tail = TailCurve.empirical(canonical, r_grid, law.spec(), law.d, seed=seed,
                                         strict=False)
    exact_tail = TailCurve.exact(r_grid, law.tail_probability(np.asarray(r_grid, dtype=float)),
                                 law.spec(), law.d)
    hole = hole_curve(law, r_grid) if with_hole and law.is_continuous else None
    base_margin = default_margin(law, L) if margin is None else int(margin)

    summary = {
        'trials': int(trials),
        'unmatched_center': int(np.sum(np.isnan(distances))),
        'cover_failures': int(sum(not s['cover_ok'] for s in stats)),
        'distance_failures': int(sum(not s['distance_ok'] for s in stats)),
        'margin_retried': int(sum(s['margin'] > base_margin for s in stats)),
        'max_R': float(max(s['R'] for s in stats)),
    }
    if summary['cover_failures'] or summary['distance_failures']:
        logger.error(f"match tail: {summary['cover_failures']} cover and "
                     f"{summary['distance_failures']} distance-bound failures",
                     extra={'seed': seed})
    return MatchTailReport(cover_tail, canonical_tail, exact_tail, hole, summary)
