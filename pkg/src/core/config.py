# src/core/config.py

"""
Configurações centralizadas do toolkit de redes perturbadas
Carrega configurações de variáveis de ambiente (.env) com fallbacks seguros
"""

import os
from pathlib import Path
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv


def load_env_file(env_path: Optional[str] = None):
    """
    Carrega variáveis de um arquivo .env (opcional) via python-dotenv.
    Variáveis já definidas no ambiente têm precedência.
    """
    if env_path is None:
        env_path = Path(__file__).parent.parent.parent / '.env'

    if not os.path.exists(env_path):
        return

    load_dotenv(env_path, override=False)


# Carrega .env se existir
load_env_file()


@dataclass
class RunnerConfig:
    """Configuração do orquestrador de experimentos"""
    output_dir: Path
    workers: int
    log_level: str

    @classmethod
    def from_env(cls):
        """Carrega configuração do runner de variáveis de ambiente"""
        return cls(
            output_dir=Path(os.getenv('PLATTICE_OUTPUT_DIR', 'results')),
            workers=int(os.getenv('PLATTICE_WORKERS', '1')),
            log_level=os.getenv('LOG_LEVEL', 'INFO')
        )


@dataclass
class NumericsConfig:
    """Tolerâncias numéricas usadas pelas auditorias e produtos truncados"""
    audit_tolerance: float
    hole_tolerance: float
    max_margin_retries: int

    @classmethod
    def from_env(cls):
        """Carrega tolerâncias de variáveis de ambiente"""
        return cls(
            audit_tolerance=float(os.getenv('PLATTICE_AUDIT_TOL', '1e-9')),
            hole_tolerance=float(os.getenv('PLATTICE_HOLE_TOL', '1e-6')),
            max_margin_retries=int(os.getenv('PLATTICE_MARGIN_RETRIES', '3'))
        )


class Config:
    """Configurações centralizadas do toolkit"""

    # ============================================
    # CONFIGURAÇÕES FIXAS (Não dependem de .env)
    # ============================================

    # Diretório raiz do projeto (onde está a pasta src)
    PROJECT_ROOT = Path(__file__).parent.parent.parent

    # Pastas importantes
    LOGS_DIR = PROJECT_ROOT / "logs"

    # Grade padrão de raios (geométrica, razão 2)
    DEFAULT_R_GRID = (1.0, 2.0, 4.0, 8.0, 16.0)

    # Margem mínima da janela estendida
    MIN_MARGIN = 8

    # Limite de sítios para a verificação exaustiva de Hall
    HALL_MAX_SITES = 20

    # Dígitos significativos na exportação CSV
    CSV_SIGNIFICANT_DIGITS = 17

    # Ambiente
    ENVIRONMENT = os.getenv('ENVIRONMENT', 'development')
    DEBUG = os.getenv('DEBUG', 'false').lower() == 'true'
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    # ============================================
    # CONFIGURAÇÕES DINÂMICAS (De .env)
    # ============================================

    # Cache das configurações (singleton)
    _runner_config = None
    _numerics_config = None

    @classmethod
    def runner(cls) -> RunnerConfig:
        """Retorna configuração do runner (singleton)"""
        if cls._runner_config is None:
            cls._runner_config = RunnerConfig.from_env()
        return cls._runner_config

    @classmethod
    def numerics(cls) -> NumericsConfig:
        """Retorna tolerâncias numéricas (singleton)"""
        if cls._numerics_config is None:
            cls._numerics_config = NumericsConfig.from_env()
        return cls._numerics_config

    @classmethod
    def reset(cls):
        """Descarta o cache (útil em testes que alteram o ambiente)"""
        cls._runner_config = None
        cls._numerics_config = None

    @classmethod
    def print_summary(cls):
        """Imprime resumo das configurações"""
        print("\n" + "=" * 60)
        print("CONFIGURAÇÃO DO TOOLKIT")
        print("=" * 60)

        print(f"\n[ENV] Ambiente: {cls.ENVIRONMENT}")
        print(f"[LOG] Log Level: {cls.LOG_LEVEL}")

        runner = cls.runner()
        print(f"\n[RUN] Runner:")
        print(f"   Output: {runner.output_dir}")
        print(f"   Workers: {runner.workers}")

        numerics = cls.numerics()
        print(f"\n[NUM] Numerics:")
        print(f"   Audit tolerance: {numerics.audit_tolerance:g}")
        print(f"   Hole tolerance: {numerics.hole_tolerance:g}")
        print(f"   Margin retries: {numerics.max_margin_retries}")

        print("\n" + "=" * 60 + "\n")


if __name__ == "__main__":
    Config.print_summary()
