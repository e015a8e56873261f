# src/process/law_spec.py
"""
Gramática textual das leis (CLI e arquivos de configuração)

    gaussian:sigma=1.0
    poly-radial:alpha=2.0
    poly-coord:alpha=0.5
    pointmass:0,0        (um único valor é replicado em todas as coordenadas)
"""

import re
from typing import Dict

from core.errors import ValidationError
from .laws import (
    GaussianLaw,
    PerturbationLaw,
    PointMassLaw,
    PolynomialCoordinateLaw,
    PolynomialRadialLaw,
)

_PARAM_RE = re.compile(r'^\s*([a-z_]+)\s*=\s*([^=\s]+)\s*$')

_PARAMETRIC = {
    'gaussian': (GaussianLaw, 'sigma'),
    'poly-radial': (PolynomialRadialLaw, 'alpha'),
    'poly-coord': (PolynomialCoordinateLaw, 'alpha'),
}


def _parse_params(body: str, spec: str) -> Dict[str, float]:
    params = {}
    for part in filter(None, (p.strip() for p in body.split(','))):
        match = _PARAM_RE.match(part)
        if not match:
            raise ValidationError(f"malformed law parameter '{part}' in '{spec}'", spec=spec)
        try:
            params[match.group(1)] = float(match.group(2))
        except ValueError:
            raise ValidationError(f"non-numeric value in '{spec}'", spec=spec)
    return params


def parse_law(spec: str, d: int) -> PerturbationLaw:
    """
    Constrói a lei a partir da string de especificação

    Args:
        spec: string na gramática acima
        d: dimensão da rede

    Raises:
        ValidationError: especificação malformada ou parâmetros inválidos
    """
    if not isinstance(spec, str) or ':' not in spec:
        raise ValidationError(f"law spec must look like 'kind:params', got {spec!r}", spec=spec)
    if int(d) < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}", d=d)

    kind, body = (s.strip() for s in spec.split(':', 1))
    kind = kind.lower()

    if kind == 'pointmass':
        try:
            offset = tuple(float(c) for c in body.split(',') if c.strip())
        except ValueError:
            raise ValidationError(f"non-numeric point-mass offset in '{spec}'", spec=spec)
        if len(offset) == 1:
            offset = offset * int(d)
        if len(offset) != int(d):
            raise ValidationError(
                f"point-mass offset has {len(offset)} coordinates, expected {d}", spec=spec
            )
        return PointMassLaw(offset=offset)

    if kind not in _PARAMETRIC:
        raise ValidationError(f"unknown law kind '{kind}'", spec=spec,
                              known=sorted(list(_PARAMETRIC) + ['pointmass']))

    cls, name = _PARAMETRIC[kind]
    params = _parse_params(body, spec)
    if set(params) != {name}:
        raise ValidationError(f"law '{kind}' takes exactly the parameter '{name}'", spec=spec)
    return cls(params[name], int(d))
