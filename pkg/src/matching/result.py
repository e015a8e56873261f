# src/matching/result.py
"""
Resultado de emparelhamento: sítio v ↦ rótulo u (M(v) = Π_u)
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from core.config import Config

METHODS = ('cover-neighborhood', 'stable-1d', 'canonical')


@dataclass(frozen=True, eq=False)
class MatchResult:
    """
    Emparelhamento parcial ou perfeito sobre uma região de sítios

    Linhas alinhadas com `sites`; `labels[n]` só tem significado onde
    `matched[n]`, e `distances` é NaN nos sítios livres.
    `bound_violations` conta sítios emparelhados além de 3R_v (só match_window preenche).
    """

    sites: np.ndarray
    labels: np.ndarray
    points: np.ndarray
    matched: np.ndarray
    distances: np.ndarray
    method: str
    bound_violations: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown matching method '{self.method}'")

    @property
    def d(self) -> int:
        return int(self.sites.shape[1])

    @property
    def size(self) -> int:
        return int(np.sum(self.matched))

    @property
    def unmatched_sites(self) -> np.ndarray:
        return self.sites[~self.matched]

    def row_of(self, v) -> int:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        hits = np.flatnonzero(np.all(self.sites == v, axis=1))
        if hits.size == 0:
            raise KeyError(f"site {tuple(v[0])} not in the matched region")
        return int(hits[0])

    def distance_of(self, v) -> float:
        return float(self.distances[self.row_of(v)])

    def label_of(self, v) -> Optional[tuple]:
        row = self.row_of(v)
        return tuple(int(c) for c in self.labels[row]) if self.matched[row] else None

    def is_injective(self) -> bool:
        used = self.labels[self.matched]
        return np.unique(used, axis=0).shape[0] == used.shape[0]

    def to_csv(self, path: Path, config_hash: Optional[str] = None) -> Path:
        """Colunas v_0.., label_0.., distance (apenas sítios emparelhados)"""
        digits = Config.CSV_SIGNIFICANT_DIGITS
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            if config_hash:
                f.write(f"# config_hash={config_hash}\n")
            writer = csv.writer(f)
            writer.writerow([f"v_{j}" for j in range(self.d)]
                            + [f"label_{j}" for j in range(self.d)] + ['distance'])
            for n in np.flatnonzero(self.matched):
                writer.writerow([int(c) for c in self.sites[n]]
                                + [int(c) for c in self.labels[n]]
                                + [f"{self.distances[n]:.{digits}g}"])
        return path
