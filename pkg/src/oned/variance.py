# src/oned/variance.py
"""
Variância exata de Π[0, t) em d = 1

Π[0, t) é soma de indicadores independentes com P_k = ℙ(k + ξ ∈ [0, t)) e
Σ_k P_k = t para t inteiro, logo Var = t − Σ_k P_k². A soma explícita cobre
k ∈ [−K, K + t]; as duas caudas (iguais por simetria) usam Euler-Maclaurin.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from core.errors import ValidationError
from process import PerturbationLaw, PointMassLaw
from analytics import TailCurve, fit_loglog
from .discrepancy import interval_hits

logger = logging.getLogger(__name__)

MIN_EXPLICIT = 64
EXPLICIT_FACTOR = 8


@dataclass(frozen=True)
class VarianceResult:
    t: int
    variance: float
    bound: float
    K: int


def _check_law(law: PerturbationLaw, t) -> int:
    if law.d != 1:
        raise ValidationError(f"one-dimensional law required, got d={law.d}")
    if not float(t).is_integer() or t < 1:
        raise ValidationError(f"t must be a positive integer, got {t}", t=t)
    return int(t)


def _shell_mass(law: PerturbationLaw, t: int) -> Callable[[float], float]:
    """m(j) = ℙ(ξ ∈ [j, j + t])"""
    return lambda j: float(interval_hits(law, [-j], 0.0, t)[0])


def _euler_maclaurin_tail(g: Callable[[float], float], a: float) -> Tuple[float, float]:
    """Σ_{j≥a} g(j) ≈ ∫_a^∞ g + g(a)/2 − g'(a)/12, e o último termo como erro"""
    integral, _ = integrate.quad(g, a, np.inf, epsabs=1e-15, epsrel=1e-11, limit=400)
    slope = (g(a + 0.5) - g(a - 0.5))
    correction = slope / 12.0
    return integral + 0.5 * g(a) - correction, abs(correction)


def _default_K(t: int, K: Optional[int]) -> int:
    return int(K) if K is not None else max(MIN_EXPLICIT, EXPLICIT_FACTOR * t)


def variance_exact(law: PerturbationLaw, t: int, K: Optional[int] = None) -> VarianceResult:
    """
    Var(Π[0, t)) = t − Σ_k P_k²

    Raises:
        ValidationError: d ≠ 1 ou t não inteiro positivo
    """
    t = _check_law(law, t)
    if isinstance(law, PointMassLaw):
        return VarianceResult(t, 0.0, 0.0, 0)
    K = _default_K(t, K)
    k = np.arange(-K, K + t + 1, dtype=np.float64)
    P = interval_hits(law, k, 0.0, t)
    mass = _shell_mass(law, t)
    tail, error = _euler_maclaurin_tail(lambda j: mass(j) ** 2, K + 1.0)
    variance = float(t) - float(np.sum(P * P)) - 2.0 * tail
    return VarianceResult(t, max(variance, 0.0), 2.0 * error, K)


def flow_balance(law: PerturbationLaw, t: int, K: Optional[int] = None) -> Tuple[float, float]:
    """
    (Σ_{k∈[0,t)} ℙ(k+ξ ∉ [0,t)), Σ_{m∉[0,t)} ℙ(m+ξ ∈ [0,t))) calculados separadamente
    """
    t = _check_law(law, t)
    K = _default_K(t, K)
    inner = np.arange(0, t, dtype=np.float64)
    outgoing = float(np.sum(1.0 - interval_hits(law, inner, 0.0, t)))
    outer = np.concatenate([np.arange(-K, 0), np.arange(t, K + t + 1)]).astype(np.float64)
    incoming = float(np.sum(interval_hits(law, outer, 0.0, t)))
    if isinstance(law, PointMassLaw):
        return outgoing, incoming
    tail, _ = _euler_maclaurin_tail(_shell_mass(law, t), K + 1.0)
    return outgoing, incoming + 2.0 * tail


def deficit_lower_bound(law: PerturbationLaw, t: int) -> dict:
    """
    σ·ℙ(N(0,1) ≥ 1) com σ² = Var Π[0, 2t): cota inferior gaussiana para
    𝔼[(2t − Π[0, 2t))⁺]
    """
    result = variance_exact(law, 2 * int(t))
    sigma = math.sqrt(result.variance)
    return {'t': int(t), 'sigma': sigma, 'bound': sigma * float(special.ndtr(-1.0))}


def variance_curve(law: PerturbationLaw, t_grid: Sequence[int]) -> dict:
    """Var Π[0, t) na grade e o expoente log-log ajustado"""
    results = [variance_exact(law, t) for t in sorted(int(t) for t in t_grid)]
    curve = TailCurve.exact([r.t for r in results], [r.variance for r in results],
                            law.spec(), 1, quantity='value',
                            max_bound=repr(max(r.bound for r in results)))
    fit = fit_loglog(curve, 'log')
    logger.info(f"variance exponent {fit.slope:.4f} for {law.spec()}")
    return {'curve': curve, 'fit': fit, 'results': results}
