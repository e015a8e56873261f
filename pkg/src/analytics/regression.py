# src/analytics/regression.py
"""
Regressão linear em coordenadas logarítmicas

Transformações:
- 'log':    log r × log valor
- 'loglog': log r × log(−log valor)  (decaimento do tipo exp(−c·r^β))
"""

import logging
from dataclasses import asdict, dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.optimize import curve_fit

from core.errors import DegenerateFit, ValidationError
from .curves import TailCurve

logger = logging.getLogger(__name__)

TRANSFORMS = ('log', 'loglog')
MIN_POINTS = 3


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    intercept: float
    r_squared: float
    slope_stderr: float
    n_points: int
    transform: str

    def predict(self, r) -> np.ndarray:
        """Valor ajustado na escala transformada"""
        return self.intercept + self.slope * np.log(np.asarray(r, dtype=np.float64))

    def to_dict(self) -> dict:
        return asdict(self)


def _linear(x, slope, intercept):
    return slope * x + intercept


def _transformed(r: np.ndarray, log_values: np.ndarray, transform: str) -> Tuple[np.ndarray, np.ndarray]:
    if transform not in TRANSFORMS:
        raise ValidationError(f"unknown transform '{transform}'", transform=transform)
    with np.errstate(divide='ignore', invalid='ignore'):
        x = np.log(r)
        y = log_values if transform == 'log' else np.log(-log_values)
    keep = np.isfinite(x) & np.isfinite(y)
    return x[keep], y[keep]


def fit_loglog(curve: Union[TailCurve, Tuple[np.ndarray, np.ndarray]], transform: str = 'log',
               r_min: Optional[float] = None, r_max: Optional[float] = None) -> LogLogFit:
    """
    Mínimos quadrados ordinários nas coordenadas transformadas

    Args:
        curve: TailCurve (log-curvas são usadas diretamente) ou par (r, valor)
        transform: 'log' ou 'loglog'
        r_min, r_max: recorte opcional do intervalo de ajuste

    Raises:
        DegenerateFit: menos de 3 pontos utilizáveis
    """
    if isinstance(curve, TailCurve):
        r = curve.r
        with np.errstate(divide='ignore'):
            log_values = curve.value if curve.quantity == 'log' else np.log(curve.value)
    else:
        r = np.asarray(curve[0], dtype=np.float64)
        with np.errstate(divide='ignore', invalid='ignore'):
            log_values = np.log(np.asarray(curve[1], dtype=np.float64))

    window = np.ones(r.shape, dtype=bool)
    if r_min is not None:
        window &= r >= r_min
    if r_max is not None:
        window &= r <= r_max
    x, y = _transformed(r[window], log_values[window], transform)

    if x.size < MIN_POINTS:
        raise DegenerateFit(f"only {x.size} usable points for a '{transform}' fit",
                            usable=int(x.size), required=MIN_POINTS)
    if np.ptp(x) == 0:
        raise DegenerateFit("all usable points share the same abscissa")

    popt, pcov = curve_fit(_linear, x, y, p0=(0.0, float(np.mean(y))))
    slope, intercept = (float(c) for c in popt)
    residual = y - _linear(x, slope, intercept)
    ss_res = float(np.sum(residual ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    stderr = float(np.sqrt(pcov[0, 0])) if np.isfinite(pcov[0, 0]) else float('nan')

    logger.debug(f"{transform} fit: slope={slope:.4f} r2={r_squared:.4f} n={x.size}")
    return LogLogFit(slope, intercept, r_squared, stderr, int(x.size), transform)


def envelope_constant(curve: TailCurve, exponent: float) -> float:
    """Menor C com valor(r) ≤ C·r^{−exponent} nos pontos resolvidos"""
    keep = curve.resolvable() & (curve.r > 0)
    if not np.any(keep):
        return 0.0
    return float(np.max(curve.value[keep] * curve.r[keep] ** exponent))
