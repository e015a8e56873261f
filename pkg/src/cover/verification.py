# src/cover/verification.py
"""
Verificação das propriedades da cobertura no núcleo da janela

- partição: cada sítio do núcleo em exatamente uma caixa de 𝒟
- cruzamentos: |𝒞(D)| ≤ |D ∩ ℤ^d| para toda caixa de 𝒟 que encontra o núcleo
- diâmetros: diam D ≤ 2 diam D′ para pares que se intersectam
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Set

import numpy as np

from process import WindowRealization
from .crossing import crossing_counts
from .fields import CoverFields

logger = logging.getLogger(__name__)


@dataclass
class CoverReport:
    """Resultado da verificação (falhas ficam em `violations`)"""

    partition_ok: bool
    crossing_ok: bool
    diameter_ok: bool
    n_boxes: int
    max_scale: int
    saturated_core: int = 0
    unaudited_boxes: int = 0
    violations: List[Dict] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return self.partition_ok and self.crossing_ok and self.diameter_ok

    def to_dict(self) -> dict:
        return {
            'partition_ok': self.partition_ok,
            'crossing_ok': self.crossing_ok,
            'diameter_ok': self.diameter_ok,
            'all_ok': self.all_ok,
            'n_boxes': self.n_boxes,
            'max_scale': self.max_scale,
            'saturated_core': self.saturated_core,
            'unaudited_boxes': self.unaudited_boxes,
            'violations': self.violations,
        }


def _neighbor_offsets(d: int):
    for offset in product((-1, 0, 1), repeat=d):
        if any(offset):
            yield np.asarray(offset, dtype=np.int64)


def adjacent_box_pairs(fields: CoverFields) -> np.ndarray:
    """
    Pares (a, b) de índices de caixas distintas que se tocam, shape (m, 2)

    Caixas fechadas se intersectam sse têm sítios a distância ℓ∞ ≤ 1.
    """
    grid = fields.grid(fields.box_index)
    d = fields.d
    pairs = []
    for offset in _neighbor_offsets(d):
        src = tuple(slice(max(0, -o), grid.shape[j] - max(0, o)) for j, o in enumerate(offset))
        dst = tuple(slice(max(0, o), grid.shape[j] - max(0, -o)) for j, o in enumerate(offset))
        a = grid[src].ravel()
        b = grid[dst].ravel()
        differ = a != b
        pairs.append(np.stack([a[differ], b[differ]], axis=1))
    allp = np.sort(np.concatenate(pairs).astype(np.int64), axis=1)
    if allp.shape[0] == 0:
        return allp.reshape(0, 2)
    return np.unique(allp, axis=0)


def box_neighbors(fields: CoverFields) -> Dict[int, Set[int]]:
    """Para cada caixa, as caixas de 𝒟 que a tocam (incluindo ela mesma)"""
    neighbors: Dict[int, Set[int]] = {b: {b} for b in range(len(fields.boxes))}
    for a, b in adjacent_box_pairs(fields):
        neighbors[int(a)].add(int(b))
        neighbors[int(b)].add(int(a))
    return neighbors


def _core_boxes(fields: CoverFields) -> np.ndarray:
    """Índices das caixas que contêm algum sítio do núcleo"""
    return np.unique(fields.box_index[fields.core_mask()])


def verify_cover_properties(realization: WindowRealization, fields: CoverFields,
                            max_violations: Optional[int] = 100) -> CoverReport:
    """
    Verifica partição, cota de cruzamentos e razão de diâmetros no núcleo
    """
    d = fields.d
    sites = fields.sites
    core = fields.core_mask()
    violations: List[Dict] = []

    def note(item: dict):
        if max_violations is None or len(violations) < max_violations:
            violations.append(item)

    # ===== Partição: cobertura de cada sítio do núcleo =====
    coverage = np.zeros(len(sites), dtype=np.int64)
    scales = np.array([b.scale for b in fields.boxes], dtype=np.int64)
    for scale in np.unique(scales):
        k_min = (-fields.extent) >> int(scale)
        nb = (fields.extent >> int(scale)) - k_min + 1
        present = np.zeros((nb,) * d, dtype=bool)
        for b in np.flatnonzero(scales == scale):
            k = (np.asarray(fields.boxes[b].corner) >> int(scale)) - k_min
            if np.all((k >= 0) & (k < nb)):
                present[tuple(k)] = True
        k_sites = (sites >> int(scale)) - k_min
        coverage += present[tuple(k_sites[:, j] for j in range(d))]
    bad_partition = np.flatnonzero(core & (coverage != 1))
    for n in bad_partition:
        note({'property': 'partition', 'site': sites[n].tolist(), 'coverage': int(coverage[n])})
    partition_ok = bad_partition.size == 0

    # ===== Cota de cruzamentos nas caixas que encontram o núcleo =====
    core_boxes = _core_boxes(fields)
    unaudited_sites = np.bincount(fields.box_index, weights=~fields.audited,
                                  minlength=len(fields.boxes))
    unaudited = int(np.sum(unaudited_sites[core_boxes] > 0))
    crossing_ok = True
    for scale in np.unique(scales[core_boxes]):
        counts = crossing_counts(realization, int(scale))
        chosen = core_boxes[scales[core_boxes] == scale]
        corners = np.asarray([fields.boxes[int(b)].corner for b in chosen], dtype=np.int64)
        seen = counts.count_at(corners)
        capacity = 1 << (int(scale) * d)
        for b, count in zip(chosen[seen > capacity], seen[seen > capacity]):
            crossing_ok = False
            note({'property': 'crossing', 'box': fields.boxes[int(b)].as_record(),
                  'count': int(count), 'capacity': capacity})

    # ===== Razão de diâmetros entre caixas que se tocam =====
    pairs = adjacent_box_pairs(fields)
    in_core = np.zeros(len(fields.boxes), dtype=bool)
    in_core[core_boxes] = True
    relevant = in_core[pairs[:, 0]] | in_core[pairs[:, 1]]
    gaps = np.abs(scales[pairs[:, 0]] - scales[pairs[:, 1]])
    offending = pairs[relevant & (gaps > 1)]
    diameter_ok = offending.shape[0] == 0
    for a, b in offending:
        note({'property': 'diameter', 'boxes': [fields.boxes[int(a)].as_record(),
                                                fields.boxes[int(b)].as_record()]})

    report = CoverReport(
        partition_ok=partition_ok,
        crossing_ok=crossing_ok,
        diameter_ok=diameter_ok,
        n_boxes=len(core_boxes),
        max_scale=int(scales.max()) if scales.size else 0,
        saturated_core=fields.saturated_core,
        unaudited_boxes=unaudited,
        violations=violations,
    )
    if not report.all_ok:
        logger.warning(f"Cover verification failed: {len(violations)} violations",
                       extra={'seed': realization.seed})
    return report
