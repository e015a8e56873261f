# src/cover/export.py
"""
Exportação da cobertura em JSON: registros por sítio e lista de caixas
"""

import json
from pathlib import Path
from typing import Optional

from .fields import CoverFields
from .verification import _core_boxes


def cover_to_dict(fields: CoverFields, config_hash: Optional[str] = None) -> dict:
    boxes = [fields.boxes[int(b)].as_record() for b in _core_boxes(fields)]
    payload = {
        'core_half_width': fields.core_half_width,
        'extent': fields.extent,
        'i_max': fields.i_max,
        'sites': fields.to_records(core_only=True),
        'boxes': boxes,
    }
    if config_hash is not None:
        payload = {'config_hash': config_hash, **payload}
    return payload


def save_cover(fields: CoverFields, path: Path, config_hash: Optional[str] = None) -> Path:
    """Grava a cobertura do núcleo como JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(cover_to_dict(fields, config_hash), f, indent=2, ensure_ascii=False)
    return path
