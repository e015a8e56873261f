# src/experiments/commands.py
"""
Subcomandos de experimento

Cada handler recebe a configuração validada e a lei construída e devolve
um Outcome: curvas (CSV de cauda), tabelas (CSV genérico), relatório JSON
e artefatos extras. A gravação fica com o ExperimentRunner.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import (
    AllMisses,
    DegenerateFit,
    DivergentMean,
    InteriorUnsaturated,
    MarginInsufficient,
    ValidationError,
)
from core.trial_pool import TrialPool
from analytics import (
    CheckReport,
    TailCurve,
    assumption_int_check,
    assumption_reg_check,
    count_variance_exact,
    fit_loglog,
    hole_bounds_check,
    hole_curve,
    hole_probability_exact,
    hole_probability_mc,
    radius_tail_vs_hole,
    remark_bound_curve,
)
from cover import cover_trial, save_cover, verify_cover_properties
from matching import distance_bound_holds, match_tail_curve, match_window
from monitoring import TrialMetricsCollector
from oned import (
    MOMENT_COLUMNS,
    deficit_lower_bound,
    escape_bound_trial,
    flow_balance,
    max_discrepancy_curve,
    stability_audit,
    tail_curve_M0,
    truncated_moment_curve,
    variance_curve,
)
from process import PerturbationLaw, trial_seeds
from schemas import ExperimentConfig, save_schemas_to_file

logger = logging.getLogger(__name__)

# Tolerância da inclinação da cauda 1D em torno de −(1+α)/2
ONED_SLOPE_TOLERANCE = 0.15
# Erro relativo aceito no balanço de fluxo
FLOW_BALANCE_TOLERANCE = 1e-6

Table = Tuple[Sequence[str], List[Sequence[Any]]]
Artifact = Callable[[Path, str], Path]


@dataclass
class Outcome:
    """Saídas de um subcomando antes da gravação"""

    report: Dict[str, Any] = field(default_factory=dict)
    curves: Dict[str, TailCurve] = field(default_factory=dict)
    tables: Dict[str, Table] = field(default_factory=dict)
    artifacts: Dict[str, Artifact] = field(default_factory=dict)
    verdict: Optional[str] = None

    @classmethod
    def from_check(cls, report: CheckReport) -> 'Outcome':
        body = {k: v for k, v in report.to_dict().items() if k != 'curves'}
        return cls(report=body, curves=dict(report.curves), verdict=report.verdict)


def _fit_or_none(curve, transform: str = 'log', **window) -> Optional[dict]:
    try:
        return fit_loglog(curve, transform, **window).to_dict()
    except DegenerateFit as exc:
        logger.info(f"no {transform} fit: {exc.message}")
        return None


def _alpha(law: PerturbationLaw) -> Optional[float]:
    return getattr(law, 'alpha', None)


def _integer_grid(grid: Sequence[float], name: str) -> List[int]:
    if any(not float(t).is_integer() for t in grid):
        raise ValidationError(f"{name} must contain integers", grid=list(grid))
    return sorted(int(t) for t in grid)


# ============================================
# PROBABILIDADE DE BURACO
# ============================================

def run_hole_exact(config: ExperimentConfig, law: PerturbationLaw,
                   metrics: TrialMetricsCollector) -> Outcome:
    curve = hole_curve(law, config.r_grid, config.tolerance)
    report = {
        'max_bound': float(curve.meta['max_bound']),
        'loglog_fit': _fit_or_none(curve, 'loglog') if law.is_continuous else None,
    }
    return Outcome(report=report, curves={'log_h': curve})


def run_hole_mc(config: ExperimentConfig, law: PerturbationLaw,
                metrics: TrialMetricsCollector) -> Outcome:
    values, stderrs, rows, misses = [], [], [], []
    for r in config.r_grid:
        try:
            estimate = hole_probability_mc(law, r, config.trials, config.seed, config.workers)
            value, stderr = estimate.estimate, estimate.stderr
        except AllMisses as exc:
            logger.warning(exc.message)
            misses.append(r)
            value, stderr = 0.0, 0.0
        metrics.record_trials(config.trials)
        exact = math.exp(hole_probability_exact(law, r, config.tolerance).log_h)
        z = (value - exact) / stderr if stderr > 0 else float('nan')
        values.append(value)
        stderrs.append(stderr)
        rows.append((r, value, stderr, exact, z))

    if law.is_continuous and len(misses) == len(config.r_grid):
        raise AllMisses(f"no hole observed at any radius in {config.trials} trials",
                        trials=config.trials, r=list(config.r_grid))
    curve = TailCurve(config.r_grid, values, stderrs, 'monte-carlo', law.spec(), law.d,
                      trials=config.trials, seed=config.seed)
    z_scores = np.array([row[4] for row in rows])
    finite = np.isfinite(z_scores)
    report = {
        'misses': misses,
        'max_abs_z': float(np.max(np.abs(z_scores[finite]))) if np.any(finite) else None,
    }
    verdict = 'pass' if report['max_abs_z'] is not None and report['max_abs_z'] <= 3 else None
    table = (('r', 'estimate', 'stderr', 'exact', 'z'), rows)
    return Outcome(report=report, curves={'h_mc': curve}, tables={'comparison': table},
                   verdict=verdict)


def run_hole_bounds(config: ExperimentConfig, law: PerturbationLaw,
                    metrics: TrialMetricsCollector) -> Outcome:
    outcome = Outcome.from_check(hole_bounds_check(law, config.r_grid, config.tolerance))
    try:
        outcome.curves['remark_bound'] = remark_bound_curve(law, config.c, config.r_grid)
    except DivergentMean as exc:
        outcome.report['remark_bound'] = exc.message
    return outcome


def run_assumptions(config: ExperimentConfig, law: PerturbationLaw,
                    metrics: TrialMetricsCollector) -> Outcome:
    integrability = assumption_int_check(law, config.r_grid)
    regularity = assumption_reg_check(law, config.k_list, config.r_grid)
    verdict = 'pass' if integrability.passed and regularity.passed else 'fail'
    if integrability.verdict == 'DivergentIntegral' and regularity.passed:
        verdict = 'DivergentIntegral'
    report = {'int': integrability.to_dict(), 'reg': regularity.to_dict()}
    return Outcome(report=report, verdict=verdict)


def run_count_variance(config: ExperimentConfig, law: PerturbationLaw,
                       metrics: TrialMetricsCollector) -> Outcome:
    results = [count_variance_exact(law, r, config.tolerance) for r in config.r_grid]
    curve = TailCurve.exact(config.r_grid, [res.variance for res in results], law.spec(),
                            law.d, quantity='value',
                            max_bound=repr(max(res.bound for res in results)))
    rows = [(res.r, res.variance, res.ratio, res.bound, res.K) for res in results]
    fit = _fit_or_none(curve)
    report = {
        'fit': fit,
        'volume_exponent': law.d,
        'hyperuniform': bool(fit is not None and fit['slope'] < law.d),
    }
    table = (('r', 'variance', 'ratio', 'bound', 'K'), rows)
    return Outcome(report=report, curves={'count_variance': curve}, tables={'ratio': table})


# ============================================
# COBERTURA E EMPARELHAMENTO EM d ≥ 1
# ============================================

def cover_verify_trial(seed: int, law: PerturbationLaw, L: int,
                       margin: Optional[int] = None) -> Dict[str, Any]:
    """Uma tentativa de cover-verify; falhas de modelo viram registro"""
    record = {'seed': int(seed), 'error': None}
    try:
        realization, fields = cover_trial(law, L, seed, margin=margin)
    except MarginInsufficient as exc:
        return {**record, 'error': type(exc).__name__, 'cover_ok': False,
                'saturated': False, 'distance_ok': False, 'margin': exc.margin}
    report = verify_cover_properties(realization, fields)
    record.update(cover_ok=report.all_ok, partition_ok=report.partition_ok,
                  crossing_ok=report.crossing_ok, diameter_ok=report.diameter_ok,
                  margin=int(realization.margin), max_scale=report.max_scale)
    try:
        result = match_window(realization, fields)
    except InteriorUnsaturated as exc:
        return {**record, 'error': type(exc).__name__, 'saturated': False, 'distance_ok': False}
    record.update(saturated=True, distance_ok=distance_bound_holds(result, fields),
                  injective=result.is_injective())
    return record


def run_cover_verify(config: ExperimentConfig, law: PerturbationLaw,
                     metrics: TrialMetricsCollector) -> Outcome:
    seeds = trial_seeds(config.seed, config.trials)
    records = TrialPool(config.workers).map(cover_verify_trial, seeds, law=law, L=config.L,
                                            margin=config.margin)
    failed = [r for r in records if not (r['cover_ok'] and r['saturated'] and r['distance_ok'])]
    metrics.record_trials(len(records), success=len(records) - len(failed))
    report = {
        'trials': len(records),
        'cover_failures': sum(not r['cover_ok'] for r in records),
        'unsaturated': sum(not r['saturated'] for r in records),
        'distance_failures': sum(not r['distance_ok'] for r in records),
        'margin_insufficient': sum(r['error'] == 'MarginInsufficient' for r in records),
        'failed_seeds': [r['seed'] for r in failed[:20]],
    }
    first = int(seeds[0])

    def write_cover(path: Path, config_hash: str) -> Path:
        _, fields = cover_trial(law, config.L, first, margin=config.margin)
        return save_cover(fields, path, config_hash)

    def write_matching(path: Path, config_hash: str) -> Path:
        realization, fields = cover_trial(law, config.L, first, margin=config.margin)
        return match_window(realization, fields).to_csv(path, config_hash)

    artifacts = {}
    if records[0]['error'] != 'MarginInsufficient':
        artifacts['cover_trial0.json'] = write_cover
    if records[0]['saturated']:
        artifacts['matching_trial0.csv'] = write_matching
    return Outcome(report=report, artifacts=artifacts, verdict='fail' if failed else 'pass')


def run_match_tail(config: ExperimentConfig, law: PerturbationLaw,
                   metrics: TrialMetricsCollector) -> Outcome:
    result = match_tail_curve(law, config.L, config.trials, config.r_grid, config.seed,
                              config.workers, config.margin)
    metrics.record_trials(config.trials, flagged=result.summary['margin_retried'])
    metrics.record_retry(result.summary['margin_retried'])
    return Outcome(report=dict(result.summary), curves=result.curves(),
                   verdict='pass' if result.all_ok else 'fail')


def run_radius_tail(config: ExperimentConfig, law: PerturbationLaw,
                    metrics: TrialMetricsCollector) -> Outcome:
    check = radius_tail_vs_hole(law, config.L, config.trials, config.r_grid, config.seed,
                                config.workers, config.margin)
    metrics.record_trials(config.trials)
    return Outcome.from_check(check)


# ============================================
# CASO UNIDIMENSIONAL
# ============================================

def _require_1d(law: PerturbationLaw):
    if law.d != 1:
        raise ValidationError(f"one-dimensional subcommand, got d={law.d}", d=law.d)


def run_oned_tail(config: ExperimentConfig, law: PerturbationLaw,
                  metrics: TrialMetricsCollector) -> Outcome:
    _require_1d(law)
    result = tail_curve_M0(law, config.trials, config.r_grid, config.L, config.seed,
                           config.workers, config.margin)
    metrics.record_trials(config.trials, flagged=result.flagged)
    report = result.to_dict()

    checks = [report['envelope'].get('below_envelope', True)]
    alpha = _alpha(law)
    if alpha is not None and 0 < alpha < 1:
        expected = -(1 + alpha) / 2
        report['expected_slope'] = expected
        checks.append(result.fit is not None
                      and abs(result.fit.slope - expected) <= ONED_SLOPE_TOLERANCE)
    if config.audit_trials:
        audit = stability_audit(law, config.L, config.trials, config.audit_trials, config.seed,
                                config.workers, config.margin)
        report['stability'] = audit
        checks.append(audit['unstable'] == 0)
    return Outcome(report=report, curves={'m0_tail': result.curve},
                   verdict='pass' if all(checks) else 'fail')


def run_oned_moment(config: ExperimentConfig, law: PerturbationLaw,
                    metrics: TrialMetricsCollector) -> Outcome:
    _require_1d(law)
    alpha = _alpha(law)
    if alpha is None:
        raise ValidationError("moment diagnostic needs a polynomial law with alpha in (0, 1)",
                              law=law.spec())
    samples = tail_curve_M0(law, config.trials, config.r_grid, config.L, config.seed,
                            config.workers, config.margin).samples
    metrics.record_trials(config.trials)
    t_grid = config.grid_t()
    curve = truncated_moment_curve(samples, alpha, t_grid, config.n_boot, config.seed)

    # controle negativo: exponencial com a mesma mediana tem todos os momentos finitos
    scale = float(np.median(samples)) or 1.0
    synthetic = np.random.default_rng(config.seed).exponential(scale, size=samples.size)
    control = truncated_moment_curve(synthetic, alpha, t_grid, config.n_boot, config.seed)

    report = {'matching': curve.to_dict(), 'exponential_control': control.to_dict()}
    verdict = ('pass' if curve.verdict == 'bounded below' and control.verdict == 'decaying to 0'
               else 'fail')
    tables = {'moment': (MOMENT_COLUMNS, curve.rows()),
              'moment_control': (MOMENT_COLUMNS, control.rows())}
    return Outcome(report=report, tables=tables, verdict=verdict)


def run_oned_variance(config: ExperimentConfig, law: PerturbationLaw,
                      metrics: TrialMetricsCollector) -> Outcome:
    _require_1d(law)
    t_grid = _integer_grid(config.grid_t(), 't_grid')
    result = variance_curve(law, t_grid)
    balance_rows = []
    for t in t_grid:
        outgoing, incoming = flow_balance(law, t)
        rel = abs(outgoing - incoming) / max(outgoing, incoming, 1e-300)
        balance_rows.append((t, outgoing, incoming, rel))
    report = {
        'fit': result['fit'].to_dict(),
        'max_bound': float(result['curve'].meta['max_bound']),
        'flow_balance_max_rel': max(row[3] for row in balance_rows),
        'deficit_bounds': [deficit_lower_bound(law, t) for t in t_grid],
    }
    alpha = _alpha(law)
    if alpha is not None:
        report['expected_slope'] = 1 - alpha
    verdict = 'pass' if report['flow_balance_max_rel'] <= FLOW_BALANCE_TOLERANCE else 'fail'
    table = (('t', 'outgoing', 'incoming', 'relative_gap'), balance_rows)
    return Outcome(report=report, curves={'variance': result['curve']},
                   tables={'flow_balance': table}, verdict=verdict)


def run_oned_discrepancy(config: ExperimentConfig, law: PerturbationLaw,
                         metrics: TrialMetricsCollector) -> Outcome:
    _require_1d(law)
    t_grid = _integer_grid(config.grid_t(), 't_grid')
    result = max_discrepancy_curve(law, config.trials, t_grid, config.seed, config.workers,
                                   config.margin, far_field=config.far_field)
    metrics.record_trials(config.trials)
    report = {'fit': result['fit'].to_dict()}
    alpha = _alpha(law)
    if alpha is not None:
        report['expected_slope'] = (1 - alpha) / 2

    rows = []
    if config.audit_trials:
        t = t_grid[-1]
        L = max(config.L, t)
        seeds = trial_seeds(config.seed, config.audit_trials)
        bounds = TrialPool(config.workers).map(escape_bound_trial, seeds, law=law, L=L, t=t,
                                               margin=config.margin)
        rows = [(int(s), b.t, b.escaped, b.bound) for s, b in zip(seeds, bounds)]
        report['escape_violations'] = sum(not b.holds for b in bounds)
    verdict = 'fail' if report.get('escape_violations') else 'pass'
    tables = {'escape': (('seed', 't', 'escaped', 'bound'), rows)} if rows else {}
    return Outcome(report=report, curves={'max_discrepancy': result['curve']}, tables=tables,
                   verdict=verdict)


def run_schemas(config: ExperimentConfig, law: PerturbationLaw,
                metrics: TrialMetricsCollector) -> Outcome:
    return Outcome(artifacts={'schemas.json': lambda path, _: save_schemas_to_file(path)})


COMMANDS: Dict[str, Callable[[ExperimentConfig, PerturbationLaw, TrialMetricsCollector], Outcome]] = {
    'hole-exact': run_hole_exact,
    'hole-mc': run_hole_mc,
    'hole-bounds': run_hole_bounds,
    'assumptions': run_assumptions,
    'count-variance': run_count_variance,
    'cover-verify': run_cover_verify,
    'match-tail': run_match_tail,
    'radius-tail': run_radius_tail,
    'oned-tail': run_oned_tail,
    'oned-moment': run_oned_moment,
    'oned-variance': run_oned_variance,
    'oned-discrepancy': run_oned_discrepancy,
    'schemas': run_schemas,
}
