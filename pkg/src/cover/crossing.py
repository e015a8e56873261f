# src/cover/crossing.py
"""
Conjuntos de cruzamento 𝒞(D) e auditoria de margem

u cruza D quando o segmento [u, Π_u] encontra D mas Π_u ∉ D.
As contagens por escala são vetorizadas: cada segmento enumera as caixas
de sua caixa envolvente (segmentos curtos) ou percorre a grade ao longo
do próprio segmento (segmentos longos).
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

import numpy as np

from core.errors import MarginExceeded
from geometry import DyadicBox, segments_intersect_box
from process import PerturbationLaw, WindowRealization

logger = logging.getLogger(__name__)

# Produto máximo de candidatos por segmento na enumeração direta
SHORT_SEGMENT_CANDIDATES = 64
# Termos explícitos na soma da auditoria
REACH_TERMS = 1 << 16


# ============================================
# AUDITORIA DE MARGEM
# ============================================

@lru_cache(maxsize=1024)
def reach_probability_bound(law: PerturbationLaw, gap: float, side: int, d: int) -> float:
    """
    Cota da união para algum sítio fora da janela alcançar a caixa

    Sítios à distância ℓ∞ n + ½ de uma caixa de aresta `side` são
    (side+2n+2)^d − (side+2n)^d; cada um alcança a caixa com probabilidade
    ≤ p(n + ½). A soma começa na primeira camada com distância ≥ gap.
    """
    if gap <= 0:
        return math.inf
    n0 = max(0, int(math.ceil(gap - 0.5)))
    n = np.arange(n0, n0 + REACH_TERMS, dtype=np.float64)
    shell = (side + 2 * n + 2) ** d - (side + 2 * n) ** d
    terms = shell * np.asarray(law.tail_probability(n + 0.5), dtype=np.float64)
    total = float(np.sum(terms))

    last, mid = terms[-1], terms[REACH_TERMS // 2]
    if last > 0:
        # cauda restante aproximada por lei de potência local
        exponent = math.log(last / mid) / math.log(n[-1] / n[REACH_TERMS // 2])
        if exponent >= -1.0:
            return math.inf
        total += last * n[-1] / (-exponent - 1.0)
    return total


def box_gap(lower: np.ndarray, upper: np.ndarray, extent: int) -> np.ndarray:
    """Distância mínima entre a caixa e qualquer sítio fora de [−extent, extent]^d"""
    reach = np.maximum(np.abs(lower), np.abs(upper))
    return extent + 1 - np.max(reach, axis=-1)


def audit_box(realization: WindowRealization, lower, upper, side: int, tolerance: float) -> float:
    """
    Levanta MarginExceeded se sítios fora da janela podem alcançar a caixa
    """
    gap = float(box_gap(np.asarray(lower), np.asarray(upper), realization.extent))
    law = realization.law
    bound = reach_probability_bound(law, gap, side, realization.d)
    if bound > tolerance:
        raise MarginExceeded(
            f"sites outside the window reach the box with probability <= {bound:.3g}",
            bound=bound, gap=gap, tolerance=tolerance, margin=realization.margin
        )
    return bound


# ============================================
# CONSULTA POR CAIXA
# ============================================

def crossing_mask(realization: WindowRealization, lower, upper) -> np.ndarray:
    """Máscara dos sítios que cruzam a caixa [lower, upper]"""
    sites = realization.sites.astype(np.float64)
    points = realization.points
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)

    # passe de volume envolvente
    seg_lo = np.minimum(sites, points)
    seg_hi = np.maximum(sites, points)
    near = np.all((seg_lo <= upper) & (seg_hi >= lower), axis=1)
    moving = np.any(sites != points, axis=1)
    idx = np.flatnonzero(near & moving)

    mask = np.zeros(realization.n_sites, dtype=bool)
    if idx.size == 0:
        return mask
    meets = segments_intersect_box(sites[idx], points[idx], lower, upper)
    landed = np.all((points[idx] >= lower) & (points[idx] <= upper), axis=1)
    mask[idx[meets & ~landed]] = True
    return mask


def crossing_set(realization: WindowRealization, box: DyadicBox,
                 tolerance: Optional[float] = None) -> np.ndarray:
    """
    𝒞(box): sítios da janela estendida que cruzam a caixa, shape (m, d)

    Com `tolerance`, audita antes a margem (MarginExceeded).
    """
    if tolerance is not None and realization.law is not None:
        audit_box(realization, box.lower, box.upper, box.side, tolerance)
    mask = crossing_mask(realization, box.lower, box.upper)
    return realization.sites[mask]


# ============================================
# CONTAGENS POR ESCALA
# ============================================

@dataclass(frozen=True, eq=False)
class ScaleCounts:
    """
    |𝒞(Q)| para toda caixa de escala `scale` que contém sítios da janela

    `counts` e `audited` são grades d-dimensionais indexadas por k − k_min.
    """

    scale: int
    k_min: int
    counts: np.ndarray
    audited: np.ndarray

    def box_index(self, sites: np.ndarray) -> tuple:
        k = (np.asarray(sites, dtype=np.int64) >> self.scale) - self.k_min
        return tuple(k[..., j] for j in range(k.shape[-1]))

    def count_at(self, sites: np.ndarray) -> np.ndarray:
        """|𝒞(Q_i(v))| para cada sítio v"""
        return self.counts[self.box_index(sites)]

    def audited_at(self, sites: np.ndarray) -> np.ndarray:
        return self.audited[self.box_index(sites)]


def _short_candidates(seg_a, seg_b, points, k_lo, span, s):
    """Pares (segmento, caixa) para segmentos de poucos candidatos"""
    d = seg_a.shape[1]
    hits_seg, hits_k = [], []
    if seg_a.shape[0] == 0:
        return np.empty(0, dtype=np.int64), np.empty((0, d), dtype=np.int64)
    for offset in product(*(range(int(m)) for m in span.max(axis=0))):
        off = np.asarray(offset, dtype=np.int64)
        valid = np.all(off < span, axis=1)
        if not np.any(valid):
            continue
        rows = np.flatnonzero(valid)
        k = k_lo[rows] + off
        lower = (s * k - 0.5).astype(np.float64)
        upper = lower + s
        meets = segments_intersect_box(seg_a[rows], seg_b[rows], lower, upper)
        landed = np.all((points[rows] >= lower) & (points[rows] <= upper), axis=1)
        keep = meets & ~landed
        hits_seg.append(rows[keep])
        hits_k.append(k[keep])
    if not hits_seg:
        return np.empty(0, dtype=np.int64), np.empty((0, d), dtype=np.int64)
    return np.concatenate(hits_seg), np.concatenate(hits_k)


def _traverse_boxes(a: np.ndarray, b: np.ndarray, s: int) -> np.ndarray:
    """
    Índices das caixas de aresta s tocadas pelo segmento [a, b]

    Parâmetros de quebra onde o segmento cruza planos da grade; em cada
    quebra e em cada ponto médio, as caixas fechadas que contêm o ponto.
    """
    direction = b - a
    ts = [np.array([0.0, 1.0])]
    for j in range(a.shape[0]):
        if direction[j] == 0:
            continue
        lo, hi = sorted((a[j], b[j]))
        m = np.arange(math.ceil((lo + 0.5) / s), math.floor((hi + 0.5) / s) + 1)
        ts.append((s * m - 0.5 - a[j]) / direction[j])
    t = np.unique(np.clip(np.concatenate(ts), 0.0, 1.0))
    t = np.concatenate([t, 0.5 * (t[1:] + t[:-1])])
    x = a + t[:, None] * direction

    u = (x + 0.5) / s
    base = np.floor(u).astype(np.int64)
    on_plane = u == np.floor(u)
    found = []
    # pontos sobre planos tocam também a caixa anterior naquele eixo
    for pattern in product((False, True), repeat=a.shape[0]):
        shift = np.asarray(pattern)
        rows = np.all(on_plane[:, shift], axis=1) if shift.any() else np.ones(len(base), bool)
        found.append(base[rows] - shift.astype(np.int64))
    return np.unique(np.concatenate(found), axis=0)


def crossing_counts(realization: WindowRealization, scale: int,
                    tolerance: Optional[float] = None) -> ScaleCounts:
    """
    Contagens de cruzamento de todas as caixas de escala `scale` da janela

    Args:
        realization: realização na janela estendida
        scale: escala i (aresta 2^i)
        tolerance: tolerância da auditoria de margem por caixa
    """
    s = 1 << scale
    extent = realization.extent
    d = realization.d
    grid_lo = (-extent) >> scale
    grid_hi = extent >> scale
    nb = grid_hi - grid_lo + 1
    counts = np.zeros((nb,) * d, dtype=np.int64)

    sites = realization.sites.astype(np.float64)
    points = realization.points
    moving = np.flatnonzero(np.any(sites != points, axis=1))

    if moving.size:
        a, b, pts = sites[moving], points[moving], points[moving]
        seg_lo = np.minimum(a, b)
        seg_hi = np.maximum(a, b)
        k_lo = np.maximum(np.ceil((seg_lo + 0.5) / s).astype(np.int64) - 1, grid_lo)
        k_hi = np.minimum(np.floor((seg_hi + 0.5) / s).astype(np.int64), grid_hi)
        span = np.maximum(k_hi - k_lo + 1, 0)
        n_cand = np.prod(span, axis=1)

        short = (n_cand > 0) & (n_cand <= SHORT_SEGMENT_CANDIDATES)
        rows = np.flatnonzero(short)
        _, ks = _short_candidates(a[rows], b[rows], pts[rows], k_lo[rows], span[rows], s)
        all_k = [ks]

        long_rows = np.flatnonzero(n_cand > SHORT_SEGMENT_CANDIDATES)
        for r in long_rows:
            boxes = _traverse_boxes(a[r], b[r], s)
            inside = np.all((boxes >= grid_lo) & (boxes <= grid_hi), axis=1)
            boxes = boxes[inside]
            lower = (s * boxes - 0.5).astype(np.float64)
            landed = np.all((pts[r] >= lower) & (pts[r] <= lower + s), axis=1)
            all_k.append(boxes[~landed])

        if long_rows.size:
            logger.debug(f"Traversed {long_rows.size} long segments at scale {scale}")

        k = np.concatenate(all_k).reshape(-1, d) - grid_lo
        if k.size:
            np.add.at(counts, tuple(k[:, j] for j in range(d)), 1)

    audited = np.ones_like(counts, dtype=bool)
    if tolerance is not None and realization.law is not None:
        axis = np.arange(grid_lo, grid_hi + 1)
        grids = np.meshgrid(*([axis] * d), indexing='ij')
        k_all = np.stack([g.ravel() for g in grids], axis=1)
        lower = s * k_all - 0.5
        gaps = box_gap(lower, lower + s, extent)
        bound_by_gap = {
            g: reach_probability_bound(realization.law, float(g), s, d) for g in np.unique(gaps)
        }
        bounds = np.array([bound_by_gap[g] for g in gaps])
        audited = (bounds <= tolerance).reshape(counts.shape)

    return ScaleCounts(scale=scale, k_min=grid_lo, counts=counts, audited=audited)
