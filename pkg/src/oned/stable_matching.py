# src/oned/stable_matching.py
"""
Emparelhamento estável guloso em d = 1

Repete: casa o par (sítio, ponto) mais próximo entre os itens livres.
Na reta, esse par é sempre vizinho na ordem de posições dos itens livres,
então basta um heap de pares adjacentes e uma lista duplamente ligada.
Desempate: menor distância, depois sítio mais à esquerda, depois ponto
mais à esquerda (e menor rótulo entre pontos coincidentes).
"""

import heapq
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.errors import ValidationError
from matching import MatchResult
from process import WindowRealization

logger = logging.getLogger(__name__)

NIL = -1
SITE, POINT = 0, 1
# Sítios auditados por bloco na busca de pares bloqueantes
AUDIT_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class StableMatchInstance:
    """
    Resultado do guloso sobre toda a janela estendida

    `site_partner[n]` é o rótulo (linha) do ponto casado com o sítio n;
    `point_partner[u]` é o sítio casado com o ponto u. `complete` é False
    quando o guloso parou assim que o sítio `stop_at` foi casado.
    """

    realization: WindowRealization
    site_partner: np.ndarray
    point_partner: np.ndarray
    complete: bool

    @property
    def positions(self) -> np.ndarray:
        return self.realization.points[:, 0]

    @property
    def site_coords(self) -> np.ndarray:
        return self.realization.sites[:, 0]

    def distances(self) -> np.ndarray:
        """|M(v) − v| por sítio (NaN nos livres)"""
        matched = self.site_partner != NIL
        safe = np.where(matched, self.site_partner, 0)
        return np.where(matched, np.abs(self.positions[safe] - self.site_coords), np.nan)

    def distance_at(self, v: int) -> float:
        return float(self.distances()[int(self.realization.index_of([v]))])

    def match_result(self, core_half_width: Optional[int] = None) -> MatchResult:
        """Restrição ao núcleo como MatchResult (método 'stable-1d')"""
        rows = np.flatnonzero(self.realization.core_mask(core_half_width))
        partner = self.site_partner[rows]
        matched = partner != NIL
        safe = np.where(matched, partner, 0)
        sites = self.realization.sites[rows]
        points = self.realization.points[safe]
        distances = np.where(matched, np.abs(points[:, 0] - sites[:, 0]), np.nan)
        return MatchResult(sites, self.realization.sites[safe], points, matched,
                           distances, 'stable-1d')

    def blocking_pairs(self, limit: Optional[int] = None) -> List[Tuple[int, int]]:
        """
        Pares (sítio v, rótulo x) com |v − Π_x| < min{|v − M(v)|, |M⁻¹(x) − Π_x|}

        Para cada sítio só os pontos mais próximos que o próprio par podem
        bloquear; a busca percorre esse intervalo aberto na lista ordenada.
        """
        if not self.complete:
            raise ValidationError("blocking-pair audit needs a complete matching")
        pos = self.positions
        order = np.argsort(pos, kind='stable')
        sorted_pos = pos[order]
        own = self.distances()
        own = np.where(np.isnan(own), np.inf, own)
        partner_site = self.point_partner
        point_own = np.where(
            partner_site != NIL,
            np.abs(pos - self.site_coords[np.where(partner_site != NIL, partner_site, 0)]),
            np.inf,
        )

        found: List[Tuple[int, int]] = []
        sites = self.site_coords.astype(np.float64)
        for start in range(0, sites.size, AUDIT_CHUNK):
            v = sites[start:start + AUDIT_CHUNK]
            d_v = own[start:start + AUDIT_CHUNK]
            lo = np.searchsorted(sorted_pos, v - d_v, side='right')
            hi = np.searchsorted(sorted_pos, v + d_v, side='left')
            width = np.maximum(hi - lo, 0)
            if not width.any():
                continue
            site_rows = np.repeat(np.arange(v.size), width)
            offsets = np.arange(width.sum()) - np.repeat(np.cumsum(width) - width, width)
            labels = order[np.repeat(lo, width) + offsets]
            gap = np.abs(v[site_rows] - pos[labels])
            blocking = (gap < d_v[site_rows]) & (gap < point_own[labels])
            blocking &= labels != self.site_partner[start + site_rows]
            for s, x in zip(site_rows[blocking], labels[blocking]):
                found.append((int(start + s), int(x)))
                if limit is not None and len(found) >= limit:
                    return found
        return found

    def is_stable(self) -> bool:
        return not self.blocking_pairs(limit=1)


def _pair_key(kind, coord, label, a: int, b: int):
    """Chave do heap para os itens adjacentes a < b de tipos diferentes"""
    s, p = (a, b) if kind[a] == SITE else (b, a)
    return (abs(coord[p] - coord[s]), coord[s], coord[p], label[p], a, b)


def greedy_stable_match(realization: WindowRealization,
                        stop_at: Optional[int] = None) -> StableMatchInstance:
    """
    Emparelhamento guloso por pares mutuamente mais próximos

    Args:
        realization: janela em d = 1
        stop_at: se dado, para assim que o sítio stop_at é casado

    Raises:
        ValidationError: realização fora de d = 1
    """
    if realization.d != 1:
        raise ValidationError(f"stable matching is one-dimensional, got d={realization.d}")
    n = realization.n_sites
    coord_all = np.concatenate([realization.sites[:, 0].astype(np.float64), realization.points[:, 0]])
    kind_all = np.concatenate([np.full(n, SITE), np.full(n, POINT)])
    label_all = np.concatenate([np.arange(n), np.arange(n)])
    order = np.lexsort((label_all, kind_all, coord_all))

    coord = coord_all[order].tolist()
    kind = kind_all[order].tolist()
    label = label_all[order].tolist()
    total = 2 * n
    prev = list(range(-1, total - 1))
    nxt = list(range(1, total + 1))
    nxt[-1] = NIL
    alive = [True] * total

    heap = [_pair_key(kind, coord, label, m, m + 1)
            for m in range(total - 1) if kind[m] != kind[m + 1]]
    heapq.heapify(heap)

    site_partner = np.full(n, NIL, dtype=np.int64)
    point_partner = np.full(n, NIL, dtype=np.int64)
    target = None if stop_at is None else int(realization.index_of([stop_at]))

    while heap:
        _, _, _, _, a, b = heapq.heappop(heap)
        if not (alive[a] and alive[b]) or nxt[a] != b:
            continue
        s, p = (a, b) if kind[a] == SITE else (b, a)
        site_partner[label[s]] = label[p]
        point_partner[label[p]] = label[s]
        alive[a] = alive[b] = False
        left, right = prev[a], nxt[b]
        if left != NIL:
            nxt[left] = right
        if right != NIL:
            prev[right] = left
        if left != NIL and right != NIL and kind[left] != kind[right]:
            heapq.heappush(heap, _pair_key(kind, coord, label, left, right))
        if target is not None and label[s] == target:
            return StableMatchInstance(realization, site_partner, point_partner, False)

    return StableMatchInstance(realization, site_partner, point_partner, True)
