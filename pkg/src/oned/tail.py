# src/oned/tail.py
"""
Cauda de |M(0)| do emparelhamento estável guloso
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from analytics import LogLogFit, TailCurve, envelope_constant, fit_loglog
from core.errors import DegenerateFit, ValidationError, WindowTooSmall
from core.trial_pool import TrialPool
from process import PerturbationLaw, sample_realization, trial_seeds
from .stable_matching import greedy_stable_match

logger = logging.getLogger(__name__)

# Fração máxima de tentativas com |M(0)| > L/2
FLAGGED_FRACTION_CAP = 1e-3
# Contagem mínima acima de r para o ponto entrar no ajuste
MIN_TAIL_COUNT = 10
# Expoente folgado do envelope C·r^{−0.6}
ENVELOPE_EXPONENT = 0.6


def center_match_distance(seed: int, law: PerturbationLaw, L: int,
                          margin: Optional[int] = None) -> float:
    """|M(0)| numa janela [−L−M, L+M] (para assim que o sítio 0 é casado)"""
    realization = sample_realization(law, L, L if margin is None else margin, seed)
    return greedy_stable_match(realization, stop_at=0).distance_at(0)


@dataclass
class OnedTailReport:
    curve: TailCurve
    samples: np.ndarray
    flagged: int
    fit: Optional[LogLogFit]
    envelope: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'trials': int(self.samples.size),
            'flagged': int(self.flagged),
            'fit': self.fit.to_dict() if self.fit else None,
            'envelope': self.envelope,
        }


def tail_curve_M0(law: PerturbationLaw, trials: int, r_grid: Sequence[float], L: int,
                  seed: int, workers: Optional[int] = None,
                  margin: Optional[int] = None) -> OnedTailReport:
    """
    ℙ̂(|M(0)| > r) com erro binomial e inclinação log-log na faixa resolvida

    Raises:
        ValidationError: lei fora de d = 1
        WindowTooSmall: mais de 0.1% das tentativas com |M(0)| > L/2
    """
    if law.d != 1:
        raise ValidationError("stable-matching tail is one-dimensional")
    seeds = trial_seeds(seed, trials)
    samples = np.array(TrialPool(workers).map(center_match_distance, seeds, law=law, L=L,
                                              margin=margin), dtype=np.float64)
    flagged = int(np.sum(samples > L / 2))
    if flagged > FLAGGED_FRACTION_CAP * trials:
        raise WindowTooSmall(
            f"{flagged} of {trials} trials matched the origin beyond L/2",
            flagged=flagged, trials=int(trials), L=int(L)
        )
    if flagged:
        logger.warning(f"{flagged} trials flagged with |M(0)| > L/2", extra={'seed': seed})

    curve = TailCurve.empirical(samples, r_grid, law.spec(), 1, seed=seed)
    counts = curve.value * curve.trials
    resolved = curve.r[(counts >= MIN_TAIL_COUNT) & (curve.r > 0)]
    fit = None
    if resolved.size:
        try:
            fit = fit_loglog(curve, 'log', r_min=float(resolved.min()), r_max=float(resolved.max()))
        except DegenerateFit as exc:
            logger.info(f"no tail fit: {exc.message}")
    envelope = {'exponent': ENVELOPE_EXPONENT,
                'minimal_constant': envelope_constant(curve, ENVELOPE_EXPONENT)}
    if fit is not None:
        fitted = float(np.exp(fit.intercept))
        keep = (curve.r >= resolved.min()) & (curve.r <= resolved.max())
        limit = fitted * curve.r[keep] ** -ENVELOPE_EXPONENT + 3.0 * curve.stderr[keep]
        envelope.update(fitted_constant=fitted,
                        below_envelope=bool(np.all(curve.value[keep] <= limit)))
    return OnedTailReport(curve, samples, flagged, fit, envelope)


def blocking_pair_count(seed: int, law: PerturbationLaw, L: int,
                        margin: Optional[int] = None) -> int:
    """Pares bloqueantes do guloso completo numa janela amostrada"""
    realization = sample_realization(law, L, L if margin is None else margin, seed)
    return len(greedy_stable_match(realization).blocking_pairs())


def stability_audit(law: PerturbationLaw, L: int, trials: int, audited: int, seed: int,
                    workers: Optional[int] = None, margin: Optional[int] = None) -> dict:
    """
    Auditoria exaustiva de pares bloqueantes em `audited` tentativas
    sorteadas entre as `trials` sementes de tail_curve_M0
    """
    seeds = trial_seeds(seed, trials)
    audited = min(int(audited), int(trials))
    picks = np.sort(np.random.default_rng(seed).choice(int(trials), size=audited, replace=False))
    counts = TrialPool(workers).map(blocking_pair_count, seeds[picks], law=law, L=L, margin=margin)
    unstable = int(sum(c > 0 for c in counts))
    if unstable:
        logger.error(f"{unstable} of {audited} audited matchings have blocking pairs",
                     extra={'seed': seed})
    return {'audited': audited, 'unstable': unstable, 'blocking_pairs': int(sum(counts))}
