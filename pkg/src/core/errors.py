# src/core/errors.py
"""
Hierarquia de exceções do toolkit
Cada erro carrega o código de saída da CLI e um registro serializável
"""

from typing import Any, Dict, Optional


class LatticeError(Exception):
    """Erro base do toolkit"""

    exit_code = 3
    category = "runtime"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_record(self) -> Dict[str, Any]:
        """Registro legível por máquina (gravado pela CLI em caso de falha)"""
        return {
            'error': type(self).__name__,
            'category': self.category,
            'exit_code': self.exit_code,
            'message': self.message,
            'details': {k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


# ============================================
# VALIDAÇÃO (exit 2)
# ============================================

class ValidationError(LatticeError):
    """Parâmetros ou configuração inválidos"""
    exit_code = 2
    category = "validation"


class RegionTooLarge(ValidationError):
    """Região grande demais para enumeração exaustiva de subconjuntos"""


# ============================================
# ERROS DE MODELO (exit 3)
# ============================================

class ModelError(LatticeError):
    """Falha durante a computação do modelo"""
    exit_code = 3
    category = "model"


class MarginExceeded(ModelError):
    """Sítios fora da janela estendida poderiam alcançar a região examinada"""


class MarginInsufficient(ModelError):
    """A margem não garante campos exatos no núcleo da janela"""

    def __init__(self, message: str, margin: Optional[int] = None, **details: Any):
        super().__init__(message, margin=margin, **details)
        self.margin = margin


class InteriorUnsaturated(ModelError):
    """Sítio do interior profundo ficou sem par (indica bug de cobertura/margem)"""


class WindowTooSmall(ModelError):
    """Fração de tentativas sinalizadas acima do limite"""


class DivergentMean(ModelError):
    """Média truncada infinita (lei polinomial com alpha <= 1)"""


class NonconvergentProduct(ModelError):
    """Tolerância do produto truncado inatingível no limite de K"""


class DegenerateFit(ModelError):
    """Pontos utilizáveis insuficientes para a regressão"""


# ============================================
# ESTATÍSTICA NÃO RESOLVIDA (exit 4)
# ============================================

class UnresolvableStatistics(LatticeError):
    """Orçamento de tentativas insuficiente para resolver a estatística"""
    exit_code = 4
    category = "unresolvable"


class AllMisses(UnresolvableStatistics):
    """Nenhuma tentativa observou o evento (probabilidade pequena demais)"""


class Unresolvable(UnresolvableStatistics):
    """Cauda empírica nula além do primeiro ponto da grade"""
