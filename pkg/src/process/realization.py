# src/process/realization.py
"""
Realizações finitas da rede perturbada {(v, Π_v)} sobre a janela estendida
[−L−M, L+M]^d, com sítios em ordem lexicográfica
"""

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from core.errors import ValidationError
from .laws import PerturbationLaw, PointMassLaw
from .rng import site_uniforms

logger = logging.getLogger(__name__)


def window_sites(extent: int, d: int) -> np.ndarray:
    """Todos os sítios de [−extent, extent]^d em ordem lexicográfica, shape (n, d)"""
    axis = np.arange(-extent, extent + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * d), indexing='ij')
    return np.stack([g.ravel() for g in grids], axis=1)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class WindowRealization:
    """
    Um ponto rotulado por sítio da janela estendida

    `sites[k]` e `points[k]` formam o par (v, Π_v); `index_of` inverte a
    ordem lexicográfica. Pontos coincidentes continuam distintos pelo rótulo.
    """

    law: Optional[PerturbationLaw]
    core_half_width: int
    margin: int
    seed: int
    sites: np.ndarray
    points: np.ndarray

    @property
    def d(self) -> int:
        return int(self.sites.shape[1])

    @property
    def extent(self) -> int:
        return self.core_half_width + self.margin

    @property
    def side(self) -> int:
        return 2 * self.extent + 1

    @property
    def n_sites(self) -> int:
        return int(self.sites.shape[0])

    @property
    def displacements(self) -> np.ndarray:
        return self.points - self.sites

    def index_of(self, v) -> np.ndarray:
        """Índice(s) de linha do(s) sítio(s) v"""
        v = np.asarray(v, dtype=np.int64)
        shifted = v + self.extent
        idx = np.zeros(shifted.shape[:-1], dtype=np.int64)
        for j in range(self.d):
            idx = idx * self.side + shifted[..., j]
        return idx

    def contains_site(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        return np.all(np.abs(v) <= self.extent, axis=-1)

    def point(self, v) -> np.ndarray:
        """Π_v"""
        return self.points[self.index_of(v)]

    def core_mask(self, half_width: Optional[int] = None) -> np.ndarray:
        """Máscara dos sítios com ‖v‖∞ ≤ half_width (padrão: L)"""
        h = self.core_half_width if half_width is None else half_width
        return np.max(np.abs(self.sites), axis=1) <= h

    def max_displacement(self) -> float:
        return float(np.max(np.abs(self.displacements))) if self.n_sites else 0.0

    @classmethod
    def from_overrides(cls, core_half_width: int, margin: int, d: int,
                       overrides: Mapping[Tuple[int, ...], Sequence[float]],
                       law: Optional[PerturbationLaw] = None) -> 'WindowRealization':
        """
        Realização construída à mão: Π_v = v exceto nos sítios de `overrides`
        """
        sites = window_sites(core_half_width + margin, d)
        points = sites.astype(np.float64)
        tmp = cls(law, core_half_width, margin, 0, sites, points)
        for v, p in overrides.items():
            v = tuple(v) if np.ndim(v) else (v,)
            if not bool(tmp.contains_site(v)):
                raise ValidationError(f"override site {v} outside the window")
            points[int(tmp.index_of(v))] = np.asarray(p, dtype=np.float64).reshape(d)
        return cls(law or PointMassLaw((0.0,) * d), core_half_width, margin, 0,
                   _readonly(sites), _readonly(points))


def sample_realization(law: PerturbationLaw, L: int, M: int, seed: int) -> WindowRealization:
    """
    Amostra Π_v = v + ξ_v para todo v ∈ [−L−M, L+M]^d

    Args:
        law: lei de perturbação (define d)
        L: meia-largura do núcleo (L ≥ 1)
        M: margem (M ≥ 0)
        seed: semente de 64 bits; o fluxo do sítio v depende só de (seed, v)
    """
    if int(L) < 1 or int(M) < 0:
        raise ValidationError(f"window needs L >= 1 and M >= 0 (got L={L}, M={M})", L=L, M=M)
    sites = window_sites(int(L) + int(M), law.d)
    uniforms = site_uniforms(seed, sites, law.n_streams)
    points = sites + law.sample(uniforms)
    logger.debug(f"Sampled {sites.shape[0]} sites for {law.spec()}")
    return WindowRealization(law, int(L), int(M), int(seed),
                             _readonly(sites), _readonly(np.ascontiguousarray(points)))
