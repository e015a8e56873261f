# src/geometry/boxes.py
"""
Caixas diádicas deslocadas e interseção segmento-caixa

Uma caixa de escala i e canto k ∈ 2^i ℤ^d é o cubo fechado
k + [−½, 2^i − ½]^d, que contém exatamente 2^{id} sítios da rede.
"""

from dataclasses import dataclass
from itertools import product
from typing import Tuple

import numpy as np

from core.errors import ValidationError


@dataclass(frozen=True, order=True)
class DyadicBox:
    """Caixa diádica identificada por (escala, canto)"""

    scale: int
    corner: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'corner', tuple(int(c) for c in self.corner))
        if self.scale < 0:
            raise ValidationError(f"scale must be >= 0, got {self.scale}")
        side = 1 << self.scale
        if any(c % side for c in self.corner):
            raise ValidationError(f"corner {self.corner} is not in 2^{self.scale} Z^d")

    @property
    def d(self) -> int:
        return len(self.corner)

    @property
    def side(self) -> int:
        """Aresta 2^i (igual ao diâmetro ℓ∞)"""
        return 1 << self.scale

    @property
    def diameter(self) -> int:
        return self.side

    @property
    def lattice_count(self) -> int:
        return 1 << (self.scale * self.d)

    @property
    def lower(self) -> np.ndarray:
        return np.asarray(self.corner, dtype=np.float64) - 0.5

    @property
    def upper(self) -> np.ndarray:
        return np.asarray(self.corner, dtype=np.float64) + self.side - 0.5

    @property
    def first_site(self) -> np.ndarray:
        return np.asarray(self.corner, dtype=np.int64)

    @property
    def last_site(self) -> np.ndarray:
        return np.asarray(self.corner, dtype=np.int64) + self.side - 1

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))

    def touches(self, other: 'DyadicBox') -> bool:
        """Interseção das caixas fechadas (contato na fronteira conta)"""
        return bool(np.all((self.lower <= other.upper) & (other.lower <= self.upper)))

    def lattice_sites(self) -> np.ndarray:
        """Sítios de ℤ^d na caixa, em ordem lexicográfica"""
        axes = [range(c, c + self.side) for c in self.corner]
        return np.array(list(product(*axes)), dtype=np.int64).reshape(-1, self.d)

    def as_record(self) -> dict:
        return {'scale': self.scale, 'corner': list(self.corner)}


def enclosing_box(v, i: int) -> DyadicBox:
    """Q_i(v): a caixa de escala i que contém o sítio v (k_j = 2^i·⌊v_j/2^i⌋)"""
    if i < 0:
        raise ValidationError(f"scale must be >= 0, got {i}")
    v = np.atleast_1d(np.asarray(v, dtype=np.int64))
    return DyadicBox(int(i), tuple(int(c) for c in (v >> i) << i))


def box_contains(box: DyadicBox, x) -> bool:
    return box.contains(x)


def box_touches(a: DyadicBox, b: DyadicBox) -> bool:
    return a.touches(b)


def lattice_sites(box: DyadicBox) -> np.ndarray:
    return box.lattice_sites()


# ============================================
# INTERSEÇÃO SEGMENTO-CAIXA (slab clipping)
# ============================================

def segments_intersect_box(a, b, lower, upper) -> np.ndarray:
    """
    Teste vetorizado: o segmento fechado [a, b] encontra a caixa fechada [lower, upper]?

    Args:
        a, b: extremos, shape (n, d)
        lower, upper: cantos da caixa, broadcast para (n, d)

    Recorte paramétrico por faixas com t ∈ [0, 1]; empates de fronteira
    contam como interseção.
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    direction = b - a

    with np.errstate(divide='ignore', invalid='ignore'):
        t1 = (lower - a) / direction
        t2 = (upper - a) / direction

    parallel = direction == 0
    inside = (a >= lower) & (a <= upper)
    t_in = np.where(parallel, np.where(inside, -np.inf, np.inf), np.minimum(t1, t2))
    t_out = np.where(parallel, np.where(inside, np.inf, -np.inf), np.maximum(t1, t2))

    enter = np.maximum(0.0, np.max(t_in, axis=-1))
    leave = np.minimum(1.0, np.min(t_out, axis=-1))
    return enter <= leave


def segment_intersects_box(a, b, box) -> bool:
    """
    Versão escalar; `box` é uma DyadicBox ou um par (lower, upper)
    """
    if isinstance(box, DyadicBox):
        lower, upper = box.lower, box.upper
    else:
        lower, upper = box
    a = np.asarray(a, dtype=np.float64).reshape(1, -1)
    b = np.asarray(b, dtype=np.float64).reshape(1, -1)
    return bool(segments_intersect_box(a, b, lower, upper)[0])
