# src/process/__init__.py
"""
Leis de perturbação, amostragem determinística por sítio e realizações finitas
"""

from .laws import (
    PerturbationLaw,
    ProductLaw,
    GaussianLaw,
    PolynomialRadialLaw,
    PolynomialCoordinateLaw,
    PointMassLaw,
    expected_max_perturbation,
    sphere_linf_moment,
)
from .law_spec import parse_law
from .rng import site_uniforms, trial_seed, trial_seeds
from .realization import WindowRealization, sample_realization, window_sites


def tail_probability(law: PerturbationLaw, r):
    """p(r) = ℙ(‖ξ‖∞ ≥ r)"""
    return law.tail_probability(r)


def box_avoidance_probability(law: PerturbationLaw, v, r: float) -> float:
    """ℙ(v + ξ ∉ B_r)"""
    return law.box_avoidance_probability(v, r)


def log_box_avoidance(law: PerturbationLaw, sites, r: float):
    """log ℙ(v + ξ ∉ B_r), vetorizado sobre sítios"""
    return law.log_avoidance(sites, r)


def truncated_mean(law: PerturbationLaw, r: float) -> float:
    """E(r) = 𝔼[‖ξ‖∞ 𝟙{‖ξ‖∞ ≥ r}]"""
    return law.truncated_mean(r)


__all__ = [
    'PerturbationLaw',
    'ProductLaw',
    'GaussianLaw',
    'PolynomialRadialLaw',
    'PolynomialCoordinateLaw',
    'PointMassLaw',
    'WindowRealization',
    'parse_law',
    'sample_realization',
    'window_sites',
    'site_uniforms',
    'trial_seed',
    'trial_seeds',
    'tail_probability',
    'box_avoidance_probability',
    'log_box_avoidance',
    'truncated_mean',
    'expected_max_perturbation',
    'sphere_linf_moment',
]
