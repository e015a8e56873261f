# src/cover/fields.py
"""
Campos de escala I⁰, I¹, I e a cobertura regular 𝒟 em janelas finitas

    I⁰_v = min { i : |𝒞(Q_i(v))| ≤ 2^{id} }          (limitado por i_max)
    R¹_v = max_u { R⁰_u − ¼‖u − v‖∞ },  I¹_v = ⌈log₂ R¹_v⌉
    I_v  = max { I¹_u : v ∈ Q_{I¹_u}(u) },  𝒟 = { Q_{I_v}(v) }

Os campos são exatos no núcleo [−L, L]^d quando a auditoria de margem
passa. Sítios fora da janela estendida são supostos com R⁰ não maior que
o máximo observado na zona de influência do núcleo.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from core.config import Config
from core.errors import MarginExceeded, MarginInsufficient, ValidationError
from core.retry_handler import retry_with_margin_doubling
from geometry import DyadicBox, enclosing_box
from process import (
    PerturbationLaw,
    WindowRealization,
    expected_max_perturbation,
    sample_realization,
)
from .crossing import ScaleCounts, audit_box, crossing_counts, crossing_mask

logger = logging.getLogger(__name__)


def scale_cap(L: int) -> int:
    """i_max = ⌊log₂ L⌋ − 1 (mínimo 0)"""
    return max(0, int(L).bit_length() - 2)


def ceil_log2(values: np.ndarray) -> np.ndarray:
    """⌈log₂ x⌉ exato para x ≥ 1 (via frexp)"""
    mantissa, exponent = np.frexp(np.asarray(values, dtype=np.float64))
    return np.where(mantissa == 0.5, exponent - 1, exponent).astype(np.int64)


@dataclass(frozen=True, eq=False)
class CoverFields:
    """
    Campos por sítio sobre a janela estendida e a cobertura montada

    Arrays indexados como `sites` (ordem lexicográfica da janela);
    `box_index[n]` aponta para D_v em `boxes`.
    """

    core_half_width: int
    extent: int
    i_max: int
    sites: np.ndarray
    I0: np.ndarray
    R1: np.ndarray
    I1: np.ndarray
    I: np.ndarray
    saturated: np.ndarray
    audited: np.ndarray
    boxes: Tuple[DyadicBox, ...]
    box_index: np.ndarray

    @property
    def d(self) -> int:
        return int(self.sites.shape[1])

    @property
    def side(self) -> int:
        return 2 * self.extent + 1

    @property
    def R0(self) -> np.ndarray:
        return np.left_shift(1, self.I0).astype(np.float64)

    @property
    def R(self) -> np.ndarray:
        return np.left_shift(1, self.I).astype(np.float64)

    def grid(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values).reshape((self.side,) * self.d)

    def index_of(self, v) -> np.ndarray:
        shifted = np.asarray(v, dtype=np.int64) + self.extent
        idx = np.zeros(shifted.shape[:-1], dtype=np.int64)
        for j in range(self.d):
            idx = idx * self.side + shifted[..., j]
        return idx

    def core_mask(self) -> np.ndarray:
        return np.max(np.abs(self.sites), axis=1) <= self.core_half_width

    def box_of(self, v) -> DyadicBox:
        """D_v"""
        return self.boxes[int(self.box_index[int(self.index_of(np.atleast_1d(v)))])]

    @property
    def saturated_core(self) -> int:
        return int(np.sum(self.saturated & self.core_mask()))

    def to_records(self, core_only: bool = True) -> List[dict]:
        """Registros {v, I0, I1, I, saturated} para exportação"""
        mask = self.core_mask() if core_only else np.ones(len(self.sites), dtype=bool)
        return [
            {
                'v': [int(c) for c in self.sites[n]],
                'I0': int(self.I0[n]),
                'I1': int(self.I1[n]),
                'I': int(self.I[n]),
                'saturated': bool(self.saturated[n]),
            }
            for n in np.flatnonzero(mask)
        ]

    @classmethod
    def from_scales(cls, core_half_width: int, extent: int, d: int, I,
                    I0=None, I1=None) -> 'CoverFields':
        """
        Campos montados a partir de uma atribuição de escalas arbitrária

        Usado em fixtures (inclusive coberturas que violam as propriedades).
        """
        from process import window_sites

        sites = window_sites(extent, d)
        I = np.asarray(I, dtype=np.int64).reshape(-1)
        I0 = I if I0 is None else np.asarray(I0, dtype=np.int64).reshape(-1)
        I1 = I if I1 is None else np.asarray(I1, dtype=np.int64).reshape(-1)
        if I.shape[0] != sites.shape[0]:
            raise ValidationError(f"scale field has {I.shape[0]} entries, window has {sites.shape[0]}")
        boxes, box_index = _dedupe_boxes(sites, I)
        n = sites.shape[0]
        return cls(core_half_width, extent, scale_cap(core_half_width), sites, I0,
                   np.left_shift(1, I1).astype(np.float64), I1, I,
                   np.zeros(n, dtype=bool), np.ones(n, dtype=bool), boxes, box_index)


def _dedupe_boxes(sites: np.ndarray, I: np.ndarray):
    corners = (sites >> I[:, None]) << I[:, None]
    rows = np.column_stack([I, corners])
    unique_rows, inverse = np.unique(rows, axis=0, return_inverse=True)
    boxes = tuple(DyadicBox(int(r[0]), tuple(int(c) for c in r[1:])) for r in unique_rows)
    return boxes, inverse.reshape(-1)


# ============================================
# CAMPO I⁰
# ============================================

def compute_I0(realization: WindowRealization, v, i_max: int,
               tolerance: Optional[float] = None) -> Tuple[int, bool]:
    """
    (I⁰_v, saturated) por enumeração direta dos cruzamentos

    Raises:
        MarginExceeded: a caixa decisiva pode ser alcançada de fora da janela
    """
    d = realization.d
    for i in range(i_max + 1):
        box = enclosing_box(v, i)
        count = int(np.sum(crossing_mask(realization, box.lower, box.upper)))
        if count <= box.lattice_count:
            # contagens só crescem com sítios não vistos
            if tolerance is not None and realization.law is not None:
                audit_box(realization, box.lower, box.upper, box.side, tolerance)
            return i, False
    logger.debug(f"Scale search saturated at site {tuple(np.atleast_1d(v))}")
    return i_max, True


def scale_fields(realization: WindowRealization, i_max: int,
                 tolerance: Optional[float] = None):
    """
    I⁰ vetorizado sobre toda a janela estendida

    Returns:
        (I0, saturated, audited, counts por escala)
    """
    sites = realization.sites
    n = realization.n_sites
    d = realization.d
    I0 = np.full(n, i_max, dtype=np.int64)
    decided = np.zeros(n, dtype=bool)
    audited = np.ones(n, dtype=bool)
    per_scale: List[ScaleCounts] = []

    for i in range(i_max + 1):
        counts = crossing_counts(realization, i, tolerance=tolerance)
        per_scale.append(counts)
        ok = counts.count_at(sites) <= (1 << (i * d))
        newly = ok & ~decided
        I0[newly] = i
        audited[newly] = counts.audited_at(sites[newly])
        decided |= newly
        if decided.all():
            break

    saturated = ~decided
    return I0, saturated, audited, per_scale


# ============================================
# SUAVIZAÇÃO E MONTAGEM
# ============================================

def smooth_field(R0_grid: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    R¹_v = max_u (R⁰_u − ¼‖u−v‖∞) sobre a grade; I¹ = ⌈log₂ R¹⌉

    Para cada nível R presente, a distância ℓ∞ ao conjunto {R⁰ = R} vem da
    transformada de distância chessboard; R¹ ≥ 1 pelo termo u = v.
    """
    R0_grid = np.asarray(R0_grid, dtype=np.float64)
    R1 = np.maximum(R0_grid, 1.0)
    for level in np.unique(R0_grid):
        if level <= 1.0:
            continue
        background = R0_grid != level
        dist = ndimage.distance_transform_cdt(background.astype(np.int8), metric='chessboard')
        R1 = np.maximum(R1, level - 0.25 * dist)
    return R1, ceil_log2(R1)


def assemble_cover(I1_grid: np.ndarray) -> np.ndarray:
    """
    I_v = max { I¹_u : v ∈ Q_{I¹_u}(u) } por espalhamento em cada escala

    A grade cobre [−E, E]^d com E = (lado − 1)/2; o resultado independe da
    ordem do espalhamento.
    """
    I1_grid = np.asarray(I1_grid, dtype=np.int64)
    d = I1_grid.ndim
    extent = (I1_grid.shape[0] - 1) // 2
    axis = np.arange(-extent, extent + 1, dtype=np.int64)
    coords = np.stack(np.meshgrid(*([axis] * d), indexing='ij'), axis=-1)

    I = I1_grid.copy()
    for scale in np.unique(I1_grid):
        if scale <= 0:
            continue
        k_min = (-extent) >> int(scale)
        nb = (extent >> int(scale)) - k_min + 1
        active = np.zeros((nb,) * d, dtype=bool)
        sources = coords[I1_grid == scale]
        k_src = (sources >> int(scale)) - k_min
        active[tuple(k_src[:, j] for j in range(d))] = True
        k_all = (coords >> int(scale)) - k_min
        covered = active[tuple(k_all[..., j] for j in range(d))]
        I = np.where(covered, np.maximum(I, scale), I)
    return I


# ============================================
# PROTOCOLO DE JANELA FINITA
# ============================================

def influence_radius(R0: np.ndarray, norms: np.ndarray, L: int) -> int:
    """
    Maior R⁰ que pode afetar D_v, N_v e a verificação no núcleo, e o raio
    ρ = 7R − 6 da zona onde os campos precisam ser exatos
    """
    core = norms <= L
    r_zone = float(R0[core].max()) if np.any(core) else 1.0
    while True:
        reach = L + 2 * r_zone - 1 + 5 * (R0 - 1)
        relevant = norms <= reach
        new = float(R0[relevant].max())
        if new <= r_zone:
            break
        r_zone = new
    return int(7 * r_zone - 6)


def build_cover(realization: WindowRealization,
                tolerance: Optional[float] = None) -> CoverFields:
    """
    Pipeline completo I⁰ → I¹ → I → 𝒟 com auditoria da margem

    Raises:
        MarginInsufficient: a zona de influência do núcleo sai da janela ou
            contém sítios não auditados/saturados
    """
    L = realization.core_half_width
    i_max = scale_cap(L)
    if tolerance is None:
        tolerance = Config.numerics().audit_tolerance

    I0, saturated, audited, _ = scale_fields(realization, i_max, tolerance)
    R0 = np.left_shift(1, I0).astype(np.float64)

    norms = np.max(np.abs(realization.sites), axis=1)
    rho = influence_radius(R0, norms, L)
    if L + rho > realization.extent:
        raise MarginInsufficient(
            f"influence zone radius {rho} exceeds margin {realization.margin}",
            margin=realization.margin, rho=rho
        )
    zone = norms <= L + rho
    core = norms <= L
    bad = zone & (~audited | (saturated & ~core))
    if np.any(bad):
        raise MarginInsufficient(
            f"{int(bad.sum())} unaudited or saturated sites near the core",
            margin=realization.margin, rho=rho
        )

    shape = (realization.side,) * realization.d
    R1_grid, I1_grid = smooth_field(R0.reshape(shape))
    I_grid = assemble_cover(I1_grid)
    I = I_grid.reshape(-1)
    boxes, box_index = _dedupe_boxes(realization.sites, I)

    fields = CoverFields(L, realization.extent, i_max, realization.sites, I0,
                         R1_grid.reshape(-1), I1_grid.reshape(-1), I,
                         saturated, audited, boxes, box_index)
    if fields.saturated_core:
        logger.warning(f"{fields.saturated_core} core sites saturated at i_max={i_max}",
                       extra={'margin': realization.margin, 'seed': realization.seed})
    return fields


def default_margin(law: PerturbationLaw, L: int) -> int:
    """M = max(8, 2⌈máximo típico das perturbações⌉), limitado a 8L"""
    typical = expected_max_perturbation(law, (2 * L + 1) ** law.d)
    if not math.isfinite(typical):
        return 8 * L
    return int(min(8 * L, max(Config.MIN_MARGIN, 2 * math.ceil(typical))))


def cover_trial(law: PerturbationLaw, L: int, seed: int, margin: Optional[int] = None,
                tolerance: Optional[float] = None,
                max_retries: Optional[int] = None) -> Tuple[WindowRealization, CoverFields]:
    """
    Amostra a janela e monta a cobertura, dobrando a margem em
    MarginInsufficient (o núcleo não muda: os fluxos dependem só de (seed, v))
    """
    if margin is None:
        margin = default_margin(law, L)
    if max_retries is None:
        max_retries = Config.numerics().max_margin_retries

    @retry_with_margin_doubling(max_retries=max_retries)
    def attempt(*, margin: int):
        realization = sample_realization(law, L, margin, seed)
        try:
            return realization, build_cover(realization, tolerance)
        except MarginExceeded as exc:
            raise MarginInsufficient(exc.message, margin=margin) from exc

    return attempt(margin=int(margin))
