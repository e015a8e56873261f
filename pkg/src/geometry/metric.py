# src/geometry/metric.py
"""
Métrica ℓ∞ (convenção de todo o toolkit)
"""

import numpy as np


def linf_norm(x) -> np.ndarray:
    """max_j |x_j| ao longo do último eixo"""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        return np.abs(x)
    return np.max(np.abs(x), axis=-1)


def linf_distance(x, y):
    """max_j |x_j − y_j|"""
    dist = linf_norm(np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64))
    return float(dist) if np.ndim(dist) == 0 else dist
