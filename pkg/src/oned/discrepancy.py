# src/oned/discrepancy.py
"""
Discrepância F(r) = r − Π[0, r) e estatísticas derivadas em d = 1

Modos para os pontos vindos de fora da janela estendida:
- 'audit':   exige que a chegada esperada de fora seja ≤ tolerância (senão MarginExceeded)
- 'window':  conta só os pontos da janela
- 'poisson': soma chegadas externas Poisson(λ_ext) uniformes em [0, r)
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from core.config import Config
from core.errors import MarginExceeded, ValidationError
from core.trial_pool import TrialPool
from process import PerturbationLaw, WindowRealization, sample_realization, trial_seeds
from analytics import TailCurve, fit_loglog
from .stable_matching import StableMatchInstance, greedy_stable_match

logger = logging.getLogger(__name__)

FAR_FIELD_MODES = ('audit', 'window', 'poisson')


def interval_hits(law: PerturbationLaw, sites: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """ℙ(k + ξ ∈ [lo, hi]) para cada k (caixa de centro (lo+hi)/2)"""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    shifted = np.asarray(sites, dtype=np.float64).reshape(-1, 1) - center
    return law.hit_probability(shifted, half)


def external_arrivals(realization: WindowRealization, t: float) -> float:
    """
    Número esperado de pontos de sítios fora da janela caindo em [0, t)

    Para t inteiro 𝔼 Π[0, t) = t, então λ_ext = t − Σ_{janela} ℙ(k+ξ ∈ [0, t)).
    """
    law = realization.law
    if law is None or not law.is_continuous:
        return 0.0
    inside = float(np.sum(interval_hits(law, realization.sites[:, 0], 0.0, t)))
    return max(float(t) - inside, 0.0)


def _far_field_points(realization: WindowRealization, t: float, rate: float) -> np.ndarray:
    rng = np.random.default_rng([realization.seed & ((1 << 63) - 1), realization.extent, int(t)])
    return np.sort(rng.uniform(0.0, t, size=rng.poisson(rate)))


def discrepancy_path(realization: WindowRealization, t: int, far_field: str = 'audit',
                     tolerance: Optional[float] = None) -> np.ndarray:
    """
    F(r) para r = 0, 1, …, t (vetor de t+1 inteiros)

    Raises:
        ValidationError: d ≠ 1, t fora de [0, extent] ou modo desconhecido
        MarginExceeded: modo 'audit' com chegada externa esperada acima da tolerância
    """
    if realization.d != 1:
        raise ValidationError("discrepancy is defined for d = 1")
    if far_field not in FAR_FIELD_MODES:
        raise ValidationError(f"unknown far-field mode '{far_field}'")
    t = int(t)
    if not 0 <= t <= realization.extent:
        raise ValidationError(f"t={t} outside [0, {realization.extent}]", t=t)
    if tolerance is None:
        tolerance = Config.numerics().audit_tolerance

    points = np.sort(realization.points[:, 0])
    if far_field != 'window' and t > 0:
        rate = external_arrivals(realization, t)
        if far_field == 'audit' and rate > tolerance:
            raise MarginExceeded(
                f"expected {rate:.3g} points enter [0, {t}) from outside the window",
                margin=realization.margin, rate=rate
            )
        if far_field == 'poisson' and rate > 0:
            points = np.sort(np.concatenate([points, _far_field_points(realization, t, rate)]))

    r = np.arange(t + 1, dtype=np.float64)
    counts = np.searchsorted(points, r, side='left') - np.searchsorted(points, 0.0, side='left')
    return (r - counts).astype(np.int64)


def discrepancy_F(realization: WindowRealization, r: float, far_field: str = 'audit',
                  tolerance: Optional[float] = None):
    """
    F(r) = r − #{pontos em [0, r)} (todos os rótulos da janela)

    r inteiro devolve int; r real conta direto (sem chegadas Poisson) e devolve float.
    """
    if r < 0:
        raise ValidationError(f"r must be nonnegative, got {r}")
    if float(r).is_integer():
        return int(discrepancy_path(realization, int(r), far_field, tolerance)[-1])
    if far_field == 'poisson':
        raise ValidationError("Poisson far-field arrivals need integer r")
    discrepancy_path(realization, int(math.ceil(r)), far_field, tolerance)
    points = realization.points[:, 0]
    return float(r - np.sum((points >= 0) & (points < r)))


@dataclass(frozen=True)
class EscapeBound:
    """|W| com W = {v ∈ [0, t): |M(v) − v| > t} contra 1 + max F − min F"""
    t: int
    escaped: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.escaped <= self.bound


def escape_set_bound(instance: StableMatchInstance, t: int) -> EscapeBound:
    """Compara |W| com a oscilação de F em [0, t] na mesma configuração"""
    F = discrepancy_path(instance.realization, t, far_field='window')
    v = instance.site_coords
    in_range = (v >= 0) & (v < t)
    escaped = int(np.sum(instance.distances()[in_range] > t))
    return EscapeBound(int(t), escaped, int(1 + F.max() - F.min()))


def _max_abs_discrepancy(seed: int, law: PerturbationLaw, t_grid: Sequence[int],
                         margin: int, far_field: str = 'poisson') -> np.ndarray:
    t_max = int(max(t_grid))
    realization = sample_realization(law, t_max, margin, seed)
    path = np.abs(discrepancy_path(realization, t_max, far_field=far_field))
    running = np.maximum.accumulate(path)
    return running[np.asarray(t_grid, dtype=np.int64)]


def max_discrepancy_curve(law: PerturbationLaw, trials: int, t_grid: Sequence[int], seed: int,
                          workers: Optional[int] = None, margin: Optional[int] = None,
                          far_field: str = 'poisson') -> dict:
    """
    𝔼 max_{r≤t} |F(r)| por Monte Carlo e expoente ajustado

    Por padrão as chegadas de fora da janela entram pelo modo 'poisson'.
    """
    t_grid = sorted(int(t) for t in t_grid)
    if margin is None:
        margin = max(t_grid)
    seeds = trial_seeds(seed, trials)
    rows = np.array(TrialPool(workers).map(_max_abs_discrepancy, seeds, law=law,
                                           t_grid=t_grid, margin=int(margin),
                                           far_field=far_field), dtype=np.float64)
    mean = rows.mean(axis=0)
    stderr = rows.std(axis=0, ddof=1) / math.sqrt(trials) if trials > 1 else np.zeros_like(mean)
    curve = TailCurve(t_grid, mean, stderr, 'monte-carlo', law.spec(), 1,
                      trials=int(trials), seed=seed, quantity='value')
    fit = fit_loglog(curve, 'log')
    logger.info(f"max |F| exponent {fit.slope:.3f} over t in [{t_grid[0]}, {t_grid[-1]}]")
    return {'curve': curve, 'fit': fit}


def escape_bound_trial(seed: int, law: PerturbationLaw, L: int, t: int,
                       margin: Optional[int] = None) -> EscapeBound:
    """escape_set_bound numa realização amostrada (guloso completo)"""
    realization = sample_realization(law, L, L if margin is None else margin, seed)
    return escape_set_bound(greedy_stable_match(realization), t)
