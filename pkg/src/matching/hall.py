# src/matching/hall.py
"""
Verificação exaustiva da condição de Hall em regiões pequenas

|N(A)| ≥ |A| para todo subconjunto A da região, contando pontos com
multiplicidade (rótulos distintos). Uniões de vizinhanças por programação
dinâmica sobre bitmasks.
"""

import logging

import numpy as np

from core.config import Config
from core.errors import RegionTooLarge
from cover import CoverFields
from process import WindowRealization
from .cover_matching import region_candidates

logger = logging.getLogger(__name__)


def hall_check_bruteforce(realization: WindowRealization, fields: CoverFields, region) -> bool:
    """
    True sse todo subconjunto A da região satisfaz |N(A)| ≥ |A|

    Raises:
        RegionTooLarge: mais sítios que Config.HALL_MAX_SITES
    """
    region = np.atleast_2d(np.asarray(region, dtype=np.int64))
    m = region.shape[0]
    if m > Config.HALL_MAX_SITES:
        raise RegionTooLarge(
            f"region has {m} sites, exhaustive check is capped at {Config.HALL_MAX_SITES}",
            sites=m, cap=Config.HALL_MAX_SITES
        )

    rows = fields.index_of(region)
    candidates = region_candidates(realization, fields, rows)
    masks = []
    for cand in candidates:
        bits = 0
        for label in cand:
            bits |= 1 << label
        masks.append(bits)

    unions = [0] * (1 << m)
    for subset in range(1, 1 << m):
        low = subset & -subset
        unions[subset] = unions[subset ^ low] | masks[low.bit_length() - 1]
        if bin(unions[subset]).count('1') < bin(subset).count('1'):
            logger.debug(f"Hall violation for subset mask {subset:#x}")
            return False
    return True
