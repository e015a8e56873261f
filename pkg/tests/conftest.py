# tests/conftest.py
"""
Pytest fixtures compartilhadas
Leis de perturbação, realizações pequenas e isolamento da configuração
"""

import pytest
import sys
from pathlib import Path

# Adiciona src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from core.config import Config  # noqa: E402
from process import (  # noqa: E402
    GaussianLaw,
    PointMassLaw,
    PolynomialCoordinateLaw,
    PolynomialRadialLaw,
    sample_realization,
)


# ============================================
# FIXTURES - CONFIGURACOES
# ============================================

@pytest.fixture(autouse=True)
def reset_config(monkeypatch, tmp_path):
    """Cada teste le o ambiente do zero e grava resultados em tmp_path"""
    monkeypatch.setenv('PLATTICE_OUTPUT_DIR', str(tmp_path / 'results'))
    monkeypatch.setenv('PLATTICE_WORKERS', '1')
    Config.reset()
    yield
    Config.reset()


# ============================================
# FIXTURES - LEIS DE PERTURBACAO
# ============================================

@pytest.fixture
def gaussian_1d():
    return GaussianLaw(sigma=1.0, dimension=1)


@pytest.fixture
def gaussian_2d():
    return GaussianLaw(sigma=1.0, dimension=2)


@pytest.fixture
def poly_coord_1d():
    """Cauda pesada com alpha em (0, 1)"""
    return PolynomialCoordinateLaw(alpha=0.5, dimension=1)


@pytest.fixture
def poly_coord_light():
    """Media finita (alpha > 1)"""
    return PolynomialCoordinateLaw(alpha=2.0, dimension=1)


@pytest.fixture
def poly_radial_2d():
    return PolynomialRadialLaw(alpha=2.0, dimension=2)


@pytest.fixture
def point_mass_1d():
    return PointMassLaw(offset=(0.0,))


@pytest.fixture
def point_mass_2d():
    return PointMassLaw(offset=(0.0, 0.0))


# ============================================
# FIXTURES - REALIZACOES
# ============================================

@pytest.fixture
def gaussian_window(gaussian_1d):
    """Janela 1D pequena com semente fixa"""
    return sample_realization(gaussian_1d, 8, 8, seed=7)


@pytest.fixture
def identity_window_2d(point_mass_2d):
    """Perturbacao nula em d = 2 (Pi_v = v)"""
    return sample_realization(point_mass_2d, 8, 8, seed=0)
