# src/analytics/export.py
"""
Exportação de curvas (CSV) e relatórios (JSON)

Todo arquivo carrega o hash da configuração: nos CSVs como linha de
comentário inicial, nos JSONs dentro do cabeçalho. Floats saem com 17
dígitos significativos, o que reconstrói cada double exatamente.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from core.config import Config
from .curves import TailCurve
from .report import to_jsonable

logger = logging.getLogger(__name__)

TAIL_COLUMNS = ('r', 'value', 'stderr', 'estimator', 'law', 'd', 'trials', 'seed')


def format_float(x: float) -> str:
    return f"{float(x):.{Config.CSV_SIGNIFICANT_DIGITS}g}"


def _cell(value: Any) -> str:
    if isinstance(value, float) or (hasattr(value, 'dtype') and value.dtype.kind == 'f'):
        return format_float(value)
    if value is None:
        return ''
    return str(value)


def write_table_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]],
                    config_hash: Optional[str] = None,
                    meta: Optional[Dict[str, str]] = None) -> Path:
    """CSV com comentários '# chave=valor' antes do cabeçalho"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        if config_hash:
            f.write(f"# config_hash={config_hash}\n")
        for key, value in sorted((meta or {}).items()):
            f.write(f"# {key}={value}\n")
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    logger.debug(f"Wrote {path}")
    return path


def read_table_csv(path: Path) -> Tuple[Dict[str, str], List[str], List[List[str]]]:
    """(metadados dos comentários, colunas, linhas como texto)"""
    meta: Dict[str, str] = {}
    with open(path, 'r', newline='', encoding='utf-8') as f:
        body = []
        for line in f:
            if line.startswith('#'):
                key, _, value = line[1:].strip().partition('=')
                meta[key.strip()] = value.strip()
            else:
                body.append(line)
    rows = list(csv.reader(body))
    return meta, rows[0], rows[1:]


def write_tail_csv(curve: TailCurve, path: Path, config_hash: Optional[str] = None) -> Path:
    """Colunas r,value,stderr,estimator,law,d,trials,seed"""
    meta = {'quantity': curve.quantity, **curve.meta}
    seed = '' if curve.seed is None else int(curve.seed)
    rows = (
        (float(r), float(v), float(s), curve.estimator, curve.law, curve.d, curve.trials, seed)
        for r, v, s in zip(curve.r, curve.value, curve.stderr)
    )
    return write_table_csv(path, TAIL_COLUMNS, rows, config_hash, meta)


def read_tail_csv(path: Path) -> Tuple[TailCurve, Optional[str]]:
    """Inverso de write_tail_csv: (curva, hash da configuração)"""
    meta, columns, rows = read_table_csv(path)
    if tuple(columns) != TAIL_COLUMNS:
        raise ValueError(f"{path} is not a tail-curve CSV (columns {columns})")
    config_hash = meta.pop('config_hash', None)
    quantity = meta.pop('quantity', 'probability')
    first = rows[0] if rows else ['', '', '', 'exact', '', '1', '0', '']
    curve = TailCurve(
        [float(row[0]) for row in rows],
        [float(row[1]) for row in rows],
        [float(row[2]) for row in rows],
        first[3], first[4], int(first[5]), int(first[6]),
        int(first[7]) if first[7] else None, quantity, meta,
    )
    return curve, config_hash


def write_report(report: Dict[str, Any], path: Path, config_hash: Optional[str] = None,
                 header: Optional[Dict[str, Any]] = None) -> Path:
    """
    JSON com chaves ordenadas; campos de tempo ficam apenas em `header`
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        'header': to_jsonable({'config_hash': config_hash, **(header or {})}),
        'report': to_jsonable(report),
    }
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')
    logger.debug(f"Wrote {path}")
    return path
