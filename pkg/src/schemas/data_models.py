# src/schemas/data_models.py
"""
Pydantic models para validacao da configuracao de experimentos e dos registros exportados
Fornece type safety e geracao automatica de JSON Schema
"""

import hashlib
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.errors import ValidationError
from process import PerturbationLaw, parse_law

logger = logging.getLogger(__name__)


# ============================================
# ENUMS
# ============================================

class Subcommand(str, Enum):
    """Subcomandos da CLI de experimentos"""
    HOLE_EXACT = "hole-exact"
    HOLE_MC = "hole-mc"
    HOLE_BOUNDS = "hole-bounds"
    ASSUMPTIONS = "assumptions"
    COVER_VERIFY = "cover-verify"
    MATCH_TAIL = "match-tail"
    RADIUS_TAIL = "radius-tail"
    ONED_TAIL = "oned-tail"
    ONED_VARIANCE = "oned-variance"
    ONED_MOMENT = "oned-moment"
    COUNT_VARIANCE = "count-variance"
    ONED_DISCREPANCY = "oned-discrepancy"
    SCHEMAS = "schemas"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    DIVERGENT_INTEGRAL = "DivergentIntegral"
    UNRESOLVABLE = "Unresolvable"


# ============================================
# GRADES
# ============================================

def parse_grid(value: Union[str, float, List[float]]) -> List[float]:
    """
    Grade de raios a partir de lista ou texto

        "2,4,8,16"          lista explícita
        "geom:16:16384:11"  np.geomspace(16, 16384, 11)
        "lin:1:10:10"       np.linspace(1, 10, 10)
    """
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, str):
        text = value.strip()
        if text.startswith(('geom:', 'lin:')):
            kind, *parts = text.split(':')
            if len(parts) != 3:
                raise ValueError(f"grid '{text}' must look like '{kind}:start:stop:num'")
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
            space = np.geomspace if kind == 'geom' else np.linspace
            return [float(x) for x in space(start, stop, num)]
        return [float(x) for x in text.split(',') if x.strip()]
    return [float(x) for x in value]


# ============================================
# LEI DE PERTURBAÇÃO
# ============================================

class LawSpec(BaseModel):
    """
    Lei de perturbação na gramática textual da CLI

    Exemplo:
        {"spec": "gaussian:sigma=1", "d": 2}
    """
    spec: str = Field(description="Especificação da lei (gaussian:sigma=1, poly-coord:alpha=0.5, ...)")
    d: int = Field(description="Dimensão da rede", ge=1, le=8)

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"spec": "poly-radial:alpha=2", "d": 2}},
    )

    @model_validator(mode='after')
    def spec_parses(self):
        try:
            parse_law(self.spec, self.d)
        except ValidationError as exc:
            raise ValueError(exc.message)
        return self

    def build(self) -> PerturbationLaw:
        return parse_law(self.spec, self.d)


# ============================================
# CONFIGURAÇÃO DE EXPERIMENTO
# ============================================

# Campos que não alteram os dados produzidos
_HASH_EXCLUDE = {'workers', 'out'}


class ExperimentConfig(BaseModel):
    """
    Configuração completa de uma execução

    Determina os arquivos de saída bit a bit; `workers` e `out` ficam
    fora do hash porque não mudam os resultados.

    Exemplo:
        {
            "subcommand": "hole-exact",
            "law": "gaussian:sigma=1",
            "d": 2,
            "r_grid": [2, 4, 8, 16, 32]
        }
    """
    subcommand: Subcommand = Field(description="Subcomando a executar")
    law: str = Field(default="gaussian:sigma=1", description="Especificação da lei de perturbação")
    d: int = Field(default=1, description="Dimensão da rede", ge=1, le=8)
    L: int = Field(default=16, description="Meia-largura do núcleo da janela", ge=1)
    margin: Optional[int] = Field(None, description="Margem da janela estendida (padrão do subcomando se nula)", ge=0)
    trials: int = Field(default=1000, description="Número de tentativas Monte Carlo", ge=1)
    r_grid: List[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0],
                                description="Grade de raios (lista, 'a,b,c' ou 'geom:início:fim:n')")
    t_grid: Optional[List[float]] = Field(None, description="Grade de t (variância, discrepância, momento)")
    seed: int = Field(default=0, description="Semente mestre", ge=0, lt=2 ** 64)
    tolerance: Optional[float] = Field(None, description="Tolerância do produto de buraco", gt=0)
    k_list: List[int] = Field(default_factory=lambda: [2, 3], description="Fatores k do teste (Reg)")
    c: float = Field(default=1.0, description="Constante da família (E(cr)/r)^{cr^d}", gt=0)
    n_boot: int = Field(default=200, description="Réplicas bootstrap", ge=10)
    far_field: str = Field(default='poisson', description="Modo de chegadas externas em F(r)")
    audit_trials: int = Field(default=100, description="Tentativas auditadas (pares bloqueantes, conjunto de escape)", ge=0)
    workers: Optional[int] = Field(None, description="Processos de trabalho (não entra no hash)", ge=1)
    out: Optional[str] = Field(None, description="Diretório de saída (não entra no hash)")

    model_config = ConfigDict(
        use_enum_values=True,
        extra='forbid',
        json_schema_extra={
            "example": {
                "subcommand": "oned-tail",
                "law": "poly-coord:alpha=0.5",
                "d": 1,
                "L": 10000,
                "trials": 20000,
                "r_grid": "geom:1:5000:25",
                "seed": 7,
            }
        },
    )

    @field_validator('r_grid', 't_grid', mode='before')
    @classmethod
    def grid_from_text(cls, value):
        if value is None:
            return value
        return parse_grid(value)

    @field_validator('r_grid', 't_grid')
    @classmethod
    def grid_positive(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is None:
            return value
        if not value:
            raise ValueError('grid must not be empty')
        if any(x <= 0 for x in value):
            raise ValueError('grid values must be positive')
        return sorted(set(value))

    @field_validator('far_field')
    @classmethod
    def far_field_known(cls, value: str) -> str:
        if value not in ('audit', 'window', 'poisson'):
            raise ValueError(f"unknown far-field mode '{value}'")
        return value

    @model_validator(mode='after')
    def law_parses(self):
        LawSpec(spec=self.law, d=self.d)
        return self

    def law_spec(self) -> LawSpec:
        return LawSpec(spec=self.law, d=self.d)

    def build_law(self) -> PerturbationLaw:
        return parse_law(self.law, self.d)

    def grid_t(self) -> List[float]:
        """t_grid, ou r_grid quando não informado"""
        return list(self.t_grid) if self.t_grid else list(self.r_grid)

    def canonical_json(self) -> str:
        data = self.model_dump(mode='json', exclude=_HASH_EXCLUDE)
        return json.dumps(data, sort_keys=True, separators=(',', ':'))

    def config_hash(self) -> str:
        """SHA-256 (16 hex) da forma canônica"""
        return hashlib.sha256(self.canonical_json().encode('utf-8')).hexdigest()[:16]

    @classmethod
    def load(cls, path: Union[str, Path], **overrides: Any) -> 'ExperimentConfig':
        """Lê JSON e aplica sobrescritas não nulas (flags da CLI)"""
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


# ============================================
# REGISTROS EXPORTADOS
# ============================================

class TailPoint(BaseModel):
    """Uma linha de curva de cauda"""
    r: float = Field(description="Raio")
    value: float = Field(description="Valor (probabilidade, log-probabilidade ou grandeza)")
    stderr: float = Field(description="Erro padrão", ge=0.0)


class VerdictReport(BaseModel):
    """
    Relatório de verificação

    Exemplo:
        {"name": "hole-bounds", "verdict": "pass", "law": "gaussian:sigma=1", "d": 2,
         "metrics": {"rho_min": 0.41, "rho_max": 0.93}}
    """
    name: str = Field(description="Nome da verificação", min_length=1)
    verdict: Verdict = Field(description="Veredito")
    law: str = Field(description="Lei de perturbação")
    d: int = Field(description="Dimensão", ge=1)
    metrics: Dict[str, Any] = Field(default_factory=dict, description="Métricas escalares")
    curves: Dict[str, List[TailPoint]] = Field(default_factory=dict, description="Curvas anexas")

    model_config = ConfigDict(use_enum_values=True)


class ErrorRecord(BaseModel):
    """Registro de falha gravado pela CLI (saída não nula)"""
    error: str = Field(description="Nome da exceção")
    category: str = Field(description="validation, model ou unresolvable")
    exit_code: int = Field(description="Código de saída", ge=1)
    message: str = Field(description="Mensagem")
    details: Dict[str, Any] = Field(default_factory=dict, description="Detalhes estruturados")
    config_hash: Optional[str] = Field(None, description="Hash da configuração, se válida")


# ============================================
# UTILITARIOS
# ============================================

def generate_json_schemas() -> Dict[str, Any]:
    """Gera JSON Schemas para todos os models"""
    models = [LawSpec, ExperimentConfig, TailPoint, VerdictReport, ErrorRecord]
    return {model.__name__: model.model_json_schema() for model in models}


def save_schemas_to_file(output_file: Union[str, Path] = "docs/schemas.json") -> Path:
    """Salva schemas em arquivo JSON"""
    output_path = Path(output_file)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, 'w', encoding='utf-8') as f:
        json.dump(generate_json_schemas(), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')
    logger.info(f"Schemas saved to {output_path}")
    return output_path
