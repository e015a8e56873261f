# src/matching/cover_matching.py
"""
Emparelhamento sobre vizinhanças da cobertura

N_v é a união das caixas de 𝒟 que tocam D_v. O grafo liga o sítio v do
núcleo ao rótulo u sempre que Π_u ∈ N_v; pontos coincidentes continuam
distintos pelo rótulo.
"""

import logging
from dataclasses import replace
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import InteriorUnsaturated
from cover import CoverFields
from geometry import DyadicBox
from process import WindowRealization
from .bipartite import NIL, BipartiteGraph, HopcroftKarp
from .result import MatchResult

logger = logging.getLogger(__name__)


def _touching_boxes(fields: CoverFields, b: int) -> np.ndarray:
    """Caixas de 𝒟 que tocam a caixa b (incluindo b), a partir da grade de sítios"""
    box = fields.boxes[b]
    grid = fields.grid(fields.box_index)
    lo = np.maximum(box.first_site - 1, -fields.extent) + fields.extent
    hi = np.minimum(box.last_site + 1, fields.extent) + fields.extent
    block = grid[tuple(slice(int(l), int(h) + 1) for l, h in zip(lo, hi))]
    return np.unique(block)


def neighborhood(fields: CoverFields, v) -> Tuple[DyadicBox, ...]:
    """
    N_v como tupla ordenada de caixas (D_v e as caixas que o tocam)
    """
    b = int(fields.box_index[int(fields.index_of(np.atleast_1d(v)))])
    return tuple(fields.boxes[int(t)] for t in _touching_boxes(fields, b))


def region_bounds(boxes: Sequence[DyadicBox]) -> Tuple[np.ndarray, np.ndarray]:
    """Menor caixa alinhada que contém a união"""
    lower = np.min([b.lower for b in boxes], axis=0)
    upper = np.max([b.upper for b in boxes], axis=0)
    return lower, upper


def _containing_cells(points: np.ndarray, extent: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pares (linha, sítio w) com Π na célula fechada w + [−½, ½]^d

    Pontos sobre faces de células entram nas duas células vizinhas.
    """
    d = points.shape[1]
    shifted = points + 0.5
    base = np.floor(shifted).astype(np.int64)
    on_face = shifted == base
    rows_out, cells_out = [], []
    for pattern in product((False, True), repeat=d):
        shift = np.asarray(pattern)
        if shift.any():
            rows = np.flatnonzero(np.all(on_face[:, shift], axis=1))
        else:
            rows = np.arange(points.shape[0])
        cells = base[rows] - shift.astype(np.int64)
        inside = np.all(np.abs(cells) <= extent, axis=1)
        rows_out.append(rows[inside])
        cells_out.append(cells[inside])
    return np.concatenate(rows_out), np.concatenate(cells_out)


def labels_by_box(realization: WindowRealization, fields: CoverFields) -> Dict[int, np.ndarray]:
    """Para cada caixa de 𝒟, as linhas (rótulos) cujo ponto está nela"""
    rows, cells = _containing_cells(realization.points, fields.extent)
    boxes = fields.box_index[fields.index_of(cells)]
    pairs = np.unique(np.stack([boxes, rows], axis=1), axis=0)
    result: Dict[int, np.ndarray] = {}
    if pairs.shape[0] == 0:
        return result
    splits = np.flatnonzero(np.diff(pairs[:, 0])) + 1
    for chunk in np.split(pairs, splits):
        result[int(chunk[0, 0])] = chunk[:, 1]
    return result


def region_candidates(realization: WindowRealization, fields: CoverFields,
                      region_rows: np.ndarray) -> List[List[int]]:
    """
    Rótulos candidatos de cada sítio da região, ordenados por
    (distância ℓ∞ até v, rótulo)
    """
    by_box = labels_by_box(realization, fields)
    empty = np.empty(0, dtype=np.int64)
    per_box: Dict[int, np.ndarray] = {}
    adjacency: List[List[int]] = []
    for row in region_rows:
        b = int(fields.box_index[row])
        if b not in per_box:
            touching = _touching_boxes(fields, b)
            per_box[b] = np.unique(np.concatenate([by_box.get(int(t), empty) for t in touching]))
        cand = per_box[b]
        if cand.size == 0:
            adjacency.append([])
            continue
        dist = np.max(np.abs(realization.points[cand] - realization.sites[row]), axis=1)
        order = np.lexsort((cand, dist))
        adjacency.append([int(c) for c in cand[order]])
    return adjacency


def _solve(realization: WindowRealization, region_rows: np.ndarray,
           adjacency: List[List[int]], method: str) -> MatchResult:
    graph = BipartiteGraph(len(region_rows), realization.n_sites, adjacency)
    solver = HopcroftKarp(graph)
    solver()
    partner = np.asarray(solver.matched_u, dtype=np.int64)
    matched = partner != NIL
    safe = np.where(matched, partner, 0)
    sites = realization.sites[region_rows]
    labels = realization.sites[safe]
    points = realization.points[safe]
    distances = np.where(matched, np.max(np.abs(points - sites), axis=1), np.nan)
    return MatchResult(sites, labels, points, matched, distances, method)


def maximum_region_matching(realization: WindowRealization, fields: CoverFields,
                            region) -> MatchResult:
    """Emparelhamento máximo restrito aos sítios de `region` (shape (m, d))"""
    region = np.atleast_2d(np.asarray(region, dtype=np.int64))
    rows = fields.index_of(region)
    adjacency = region_candidates(realization, fields, rows)
    return _solve(realization, rows, adjacency, 'cover-neighborhood')


def match_window(realization: WindowRealization, fields: CoverFields,
                 core_half_width: Optional[int] = None) -> MatchResult:
    """
    Emparelhamento máximo dos sítios do núcleo com pontos em suas vizinhanças

    Sítios em ordem lexicográfica; candidatos por (distância, rótulo).
    Sítios além de 3R_v ficam contados em `bound_violations`.

    Raises:
        InteriorUnsaturated: sítio do interior profundo ficou livre
    """
    L = fields.core_half_width if core_half_width is None else int(core_half_width)
    norms = np.max(np.abs(fields.sites), axis=1)
    rows = np.flatnonzero(norms <= L)
    adjacency = region_candidates(realization, fields, rows)
    result = _solve(realization, rows, adjacency, 'cover-neighborhood')

    R = fields.R[rows]
    over = result.matched & (result.distances > 3 * R)
    if np.any(over):
        logger.error(f"{int(over.sum())} matched sites exceed the 3R distance bound",
                     extra={'seed': realization.seed})
        result = replace(result, bound_violations=int(over.sum()))

    depth = L - norms[rows]
    deep = depth > float(np.max(3 * R))
    unsaturated = deep & ~result.matched
    if np.any(unsaturated):
        raise InteriorUnsaturated(
            f"{int(unsaturated.sum())} deep-interior sites left unmatched",
            sites=[tuple(int(c) for c in s) for s in result.sites[unsaturated][:10]],
            seed=realization.seed
        )
    return result


def distance_bound_holds(result: MatchResult, fields: CoverFields) -> bool:
    """‖M(v) − v‖∞ ≤ 3R_v para todo sítio emparelhado"""
    rows = fields.index_of(result.sites)
    bound = 3 * fields.R[rows]
    return bool(np.all(result.distances[result.matched] <= bound[result.matched]))


def canonical_matching(realization: WindowRealization,
                       core_half_width: Optional[int] = None) -> MatchResult:
    """M₀(v) = Π_v (linha de base, cauda igual a p(r))"""
    L = realization.core_half_width if core_half_width is None else int(core_half_width)
    rows = np.flatnonzero(realization.core_mask(L))
    sites = realization.sites[rows]
    points = realization.points[rows]
    distances = np.max(np.abs(points - sites), axis=1)
    return MatchResult(sites, sites.copy(), points, np.ones(len(rows), dtype=bool),
                       distances, 'canonical')
