# src/analytics/hole.py
"""
Probabilidade de buraco h(r) = ℙ(Π ∩ B_r = ∅) e estatísticas de contagem

Exato: log h = Σ_{‖v‖∞≤K} log ℙ(v+ξ ∉ B_r) − Σ_{‖v‖∞>K} ℙ(v+ξ ∈ B_r).
A soma distante sai de 𝔼|Π ∩ B_r| menos a massa próxima; o termo de
segunda ordem omitido é limitado por max_far·S_far/(1 − max_far).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from core.config import Config
from core.errors import AllMisses, DegenerateFit, NonconvergentProduct, ValidationError
from core.trial_pool import TrialPool
from process import PerturbationLaw, PointMassLaw, site_uniforms, trial_seeds, window_sites
from .curves import TailCurve
from .regression import fit_loglog
from .report import CheckReport

logger = logging.getLogger(__name__)

# Teto de sítios na janela [−K, K]^d do produto truncado
MAX_PRODUCT_SITES = 1 << 22
# Cauda por sítio desprezada na janela do Monte Carlo
MC_SITE_TAIL = 1e-12
MAX_MC_SITES = 1 << 16
# Uniformes por lote vetorizado do Monte Carlo
MC_BATCH_UNIFORMS = 1 << 22
# Razão máxima ρ_max/ρ_min aceita pelo sanduíche
SANDWICH_RATIO_CAP = 10.0


@dataclass(frozen=True)
class HoleResult:
    """log h(r) com cota de truncamento (K = meia-largura da janela usada)"""
    r: float
    log_h: float
    bound: float
    K: int

    @property
    def h(self) -> float:
        return math.exp(self.log_h)


@dataclass(frozen=True)
class CountVariance:
    """Var|Π ∩ B_r| e sua razão para o volume (2r)^d"""
    r: float
    variance: float
    ratio: float
    bound: float
    K: int


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    holes: int
    trials: int


# ============================================
# SOMAS EXATAS
# ============================================

def _far_factor(law: PerturbationLaw, r: float, K: int) -> float:
    """Cota para ℙ(v+ξ ∈ B_r) em todo ‖v‖∞ > K"""
    return float(law.tail_probability(max(K + 1 - r, 0.0)))


def _second_order_bound(max_far: float, s_far: float) -> float:
    if s_far <= 0:
        return 0.0
    if max_far >= 1.0:
        return math.inf
    return max_far * s_far / (1.0 - max_far)


def _window_sums(law: PerturbationLaw, r: float, K: int) -> Tuple[float, float, float]:
    """(Σ log ℙ(∉), Σ ℙ(∈), Σ ℙ(∈)²) sobre [−K, K]^d"""
    hits, log_miss = law.box_probabilities(window_sites(K, law.d), r)
    return float(np.sum(log_miss)), float(np.sum(hits)), float(np.sum(hits * hits))


def _initial_K(law: PerturbationLaw, r: float) -> int:
    shift = law.norm if isinstance(law, PointMassLaw) else 0.0
    return int(math.ceil(r + shift)) + 2


def _check_sites(law: PerturbationLaw, K: int, r: float):
    if (2 * K + 1) ** law.d > MAX_PRODUCT_SITES:
        raise NonconvergentProduct(
            f"truncated product did not reach tolerance before K={K}",
            r=r, K=K, d=law.d
        )


def hole_probability_exact(law: PerturbationLaw, r: float,
                           tolerance: Optional[float] = None) -> HoleResult:
    """
    log h(r) pelo produto truncado em [−K, K]^d

    K começa em ⌈r⌉ + 2 e dobra até a cota de truncamento ficar abaixo de
    tolerance·max(1, |log h|).

    Raises:
        ValidationError: r ≤ 0 ou tolerância não positiva
        NonconvergentProduct: janela passaria de MAX_PRODUCT_SITES sítios
    """
    r = float(r)
    if not (r > 0 and math.isfinite(r)):
        raise ValidationError(f"hole radius must be positive, got {r}", r=r)
    if tolerance is None:
        tolerance = Config.numerics().hole_tolerance
    if not tolerance > 0:
        raise ValidationError(f"tolerance must be positive, got {tolerance}")

    total = law.expected_count(r)
    K = _initial_K(law, r)
    while True:
        _check_sites(law, K, r)
        near_log, near_mass, _ = _window_sums(law, r, K)
        if near_log == -math.inf:
            return HoleResult(r, -math.inf, 0.0, K)
        s_far = max(total - near_mass, 0.0)
        log_h = min(near_log - s_far, 0.0)
        bound = _second_order_bound(_far_factor(law, r, K), s_far)
        if bound < tolerance * max(1.0, abs(log_h)):
            logger.debug(f"log h({r:g}) = {log_h:.6g} (K={K}, bound={bound:.2e})")
            return HoleResult(r, log_h, bound, K)
        K *= 2


def hole_curve(law: PerturbationLaw, r_grid: Sequence[float],
               tolerance: Optional[float] = None) -> TailCurve:
    """Curva exata de log h(r) (quantity='log'), com a maior cota nos metadados"""
    results = [hole_probability_exact(law, r, tolerance) for r in r_grid]
    return TailCurve.exact(
        [res.r for res in results], [res.log_h for res in results], law.spec(), law.d,
        quantity='log', max_bound=repr(max(res.bound for res in results))
    )


def count_variance_exact(law: PerturbationLaw, r: float,
                         tolerance: Optional[float] = None) -> CountVariance:
    """
    Var|Π ∩ B_r| = Σ_v q_v(1 − q_v) = 𝔼|Π ∩ B_r| − Σ_v q_v²

    A parte distante de Σ q_v² fica na cota reportada.
    """
    r = float(r)
    if not (r > 0 and math.isfinite(r)):
        raise ValidationError(f"radius must be positive, got {r}", r=r)
    if tolerance is None:
        tolerance = Config.numerics().hole_tolerance

    total = law.expected_count(r)
    K = _initial_K(law, r)
    while True:
        _check_sites(law, K, r)
        _, near_mass, near_sq = _window_sums(law, r, K)
        s_far = max(total - near_mass, 0.0)
        bound = _second_order_bound(_far_factor(law, r, K), s_far)
        variance = max(total - near_sq, 0.0)
        if bound < tolerance * max(1.0, variance):
            return CountVariance(r, variance, variance / (2.0 * r) ** law.d, bound, K)
        K *= 2


def remark_bound_curve(law: PerturbationLaw, c: float, r_grid: Sequence[float]) -> TailCurve:
    """
    Família c·r^d·log(E(cr)/r) (log da cota (E(cr)/r)^{c r^d}) para c escolhido
    """
    if not c > 0:
        raise ValidationError(f"c must be positive, got {c}", c=c)
    values = []
    for r in r_grid:
        mean = law.truncated_mean(c * r)
        values.append(c * r ** law.d * math.log(mean / r) if mean > 0 else -math.inf)
    return TailCurve.exact(r_grid, values, law.spec(), law.d, quantity='value', c=repr(c))


# ============================================
# MONTE CARLO
# ============================================

def reach_radius(law: PerturbationLaw, tail: float = MC_SITE_TAIL) -> float:
    """Menor raio t com p(t) ≤ tail (bisseção)"""
    if isinstance(law, PointMassLaw):
        return law.norm
    hi = 1.0
    while law.tail_probability(hi) > tail:
        hi *= 2.0
        if hi > 1e12:
            return math.inf
    lo = hi / 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if law.tail_probability(mid) > tail:
            lo = mid
        else:
            hi = mid
    return hi


def _count_holes(seeds: np.ndarray, law: PerturbationLaw, sites: np.ndarray, r: float) -> int:
    n, d = sites.shape
    uniforms = site_uniforms(seeds, sites, law.n_streams)
    flat = uniforms.reshape(len(seeds) * n, law.n_streams)
    points = sites[None, :, :] + law.sample(flat).reshape(len(seeds), n, d)
    inside = np.all(np.abs(points) <= r, axis=2)
    return int(np.sum(~np.any(inside, axis=1)))


def hole_probability_mc(law: PerturbationLaw, r: float, trials: int, seed: int,
                        workers: Optional[int] = None) -> MonteCarloEstimate:
    """
    Fração de realizações sem ponto em B_r, com erro binomial

    Só entram sítios com ‖v‖∞ ≤ r + t*, onde p(t*) ≤ 10⁻¹².

    Raises:
        ValidationError: janela de alcance grande demais (caudas pesadas)
        AllMisses: nenhuma tentativa produziu buraco numa lei aleatória
    """
    r = float(r)
    if not r > 0 or int(trials) < 1:
        raise ValidationError("hole Monte Carlo needs r > 0 and trials >= 1", r=r, trials=trials)
    reach = reach_radius(law)
    extent = int(math.floor(r + reach)) if math.isfinite(reach) else None
    if extent is None or (2 * extent + 1) ** law.d > MAX_MC_SITES:
        raise ValidationError(
            f"reach window for {law.spec()} is too large for Monte Carlo",
            reach=reach, cap=MAX_MC_SITES
        )
    sites = window_sites(extent, law.d)
    per_trial = max(1, sites.shape[0] * max(1, law.n_streams))
    pool = TrialPool(workers, batch_size=max(1, MC_BATCH_UNIFORMS // per_trial))
    seeds = trial_seeds(seed, trials)
    holes = int(sum(pool.map_batches(_count_holes, pool.batches(seeds),
                                     law=law, sites=sites, r=r)))

    estimate = holes / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    if holes == 0 and law.is_continuous:
        raise AllMisses(
            f"no hole observed in {trials} trials at r={r:g}",
            r=r, trials=trials
        )
    if law.is_continuous and holes < 10:
        logger.warning(f"only {holes} holes in {trials} trials at r={r:g}; estimate is coarse")
    return MonteCarloEstimate(estimate, stderr, holes, int(trials))


# ============================================
# SANDUÍCHE h ENTRE POTÊNCIAS DE p
# ============================================

def _rate(law: PerturbationLaw, r: float) -> float:
    """Taxa esperada de −log h: r^{d+2} (gaussiana) ou r^d log r (polinomial)"""
    if law.kind == 'gaussian':
        return r ** (law.d + 2)
    return r ** law.d * math.log(r)


def hole_bounds_check(law: PerturbationLaw, r_grid: Sequence[float],
                      tolerance: Optional[float] = None) -> CheckReport:
    """
    ρ(r) = log h(r) / (r^d log p(r)) na grade; passa sse 0 < ρ_min ≤ ρ_max < ∞
    e ρ_max/ρ_min ≤ SANDWICH_RATIO_CAP
    """
    if not law.is_continuous:
        raise ValidationError("degenerate laws have h = 0 and are excluded", law=law.spec())
    curve = hole_curve(law, r_grid, tolerance)
    log_p = np.array([law.log_tail_probability(r) for r in curve.r])
    volume = curve.r ** law.d
    with np.errstate(divide='ignore', invalid='ignore'):
        rho = np.where(log_p < 0, curve.value / (volume * log_p), np.nan)
    usable = np.isfinite(rho)

    rates = np.array([_rate(law, r) if r > 1 else np.nan for r in curve.r])
    with np.errstate(invalid='ignore'):
        rate_ratio = -curve.value / rates

    metrics = {'rho': rho, 'rate_ratio': rate_ratio, 'log_p': log_p}
    verdict = 'fail'
    if np.any(usable):
        rho_min = float(np.min(rho[usable]))
        rho_max = float(np.max(rho[usable]))
        metrics.update(rho_min=rho_min, rho_max=rho_max)
        if 0 < rho_min <= rho_max < math.inf and rho_max / rho_min <= SANDWICH_RATIO_CAP:
            verdict = 'pass'
    finite_rate = np.isfinite(rate_ratio) & (rate_ratio > 0)
    if np.any(finite_rate):
        metrics['rate_ratio_spread'] = float(np.max(rate_ratio[finite_rate])
                                             / np.min(rate_ratio[finite_rate]))
    try:
        metrics['loglog_fit'] = fit_loglog(curve, 'loglog').to_dict()
    except DegenerateFit as exc:
        logger.info(f"no log-log fit for the hole curve: {exc}")

    return CheckReport('hole-bounds', verdict, law.spec(), law.d, metrics, {'log_h': curve})
