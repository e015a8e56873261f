# tests/unit/test_analytics.py
"""
Testes unitarios para as analises de cauda
Probabilidade de buraco, hipoteses, regressao, curvas e exportacao
"""

import json
import math

import numpy as np
import pytest

from analytics import (
    CheckReport,
    TailCurve,
    assumption_int_check,
    assumption_reg_check,
    center_radius,
    count_variance_exact,
    envelope_constant,
    fit_loglog,
    hole_bounds_check,
    hole_curve,
    hole_probability_exact,
    hole_probability_mc,
    radius_tail_vs_hole,
    read_tail_csv,
    remark_bound_curve,
    to_jsonable,
    write_report,
    write_tail_csv,
)
from core.errors import AllMisses, DegenerateFit, DivergentMean, ValidationError
from process import (
    GaussianLaw,
    PointMassLaw,
    PolynomialCoordinateLaw,
    log_box_avoidance,
    window_sites,
)


@pytest.mark.unit
class TestHoleProbability:
    """Testes do produto truncado e do Monte Carlo"""

    # ============================================
    # TESTES - EXATO
    # ============================================

    def test_matches_brute_force_product(self, gaussian_1d):
        """Testa log h contra a soma direta em janela larga"""
        result = hole_probability_exact(gaussian_1d, 2.0)
        brute = float(np.sum(log_box_avoidance(gaussian_1d, window_sites(200, 1), 2.0)))
        assert result.log_h == pytest.approx(brute, rel=1e-5)
        assert result.bound >= 0.0

    def test_hole_at_origin_is_impossible(self, point_mass_1d):
        """Testa h = 0 quando o proprio sitio 0 fica em B_r"""
        result = hole_probability_exact(point_mass_1d, 1.0)
        assert result.log_h == -math.inf
        assert result.h == 0.0

    def test_shifted_point_mass_leaves_hole(self):
        """Testa h = 1 quando todos os pontos caem entre as bolas"""
        result = hole_probability_exact(PointMassLaw((0.5,)), 0.25)
        assert result.log_h == 0.0

    def test_hole_curve_decreasing(self, gaussian_2d):
        """Testa curva log h monotona com cota nos metadados"""
        curve = hole_curve(gaussian_2d, [0.5, 1.0, 2.0])
        assert curve.quantity == 'log'
        assert curve.is_nonincreasing()
        assert float(curve.meta['max_bound']) >= 0.0

    def test_invalid_radius(self, gaussian_1d):
        """Testa raio nao positivo"""
        with pytest.raises(ValidationError):
            hole_probability_exact(gaussian_1d, 0.0)

    # ============================================
    # TESTES - MONTE CARLO
    # ============================================

    def test_monte_carlo_agrees_with_exact(self, gaussian_1d):
        """Testa estimativa MC dentro de 5 erros padrao"""
        estimate = hole_probability_mc(gaussian_1d, 0.5, 2000, seed=11, workers=1)
        exact = hole_probability_exact(gaussian_1d, 0.5).h
        assert abs(estimate.estimate - exact) <= 5 * estimate.stderr
        assert estimate.trials == 2000

    def test_monte_carlo_is_reproducible(self, gaussian_1d):
        """Testa mesma semente, mesma contagem"""
        a = hole_probability_mc(gaussian_1d, 0.5, 300, seed=5, workers=1)
        b = hole_probability_mc(gaussian_1d, 0.5, 300, seed=5, workers=1)
        assert a.holes == b.holes

    def test_all_misses(self, gaussian_1d):
        """Testa buraco raro demais para o orcamento"""
        with pytest.raises(AllMisses):
            hole_probability_mc(gaussian_1d, 8.0, 10, seed=1, workers=1)

    def test_degenerate_law_certain_hole(self):
        """Testa h = 1 por Monte Carlo sem perturbacao aleatoria"""
        estimate = hole_probability_mc(PointMassLaw((0.5,)), 0.25, 20, seed=1, workers=1)
        assert estimate.estimate == 1.0
        assert estimate.stderr == 0.0

    # ============================================
    # TESTES - SANDUICHE E VARIANCIA
    # ============================================

    def test_gaussian_sandwich_passes(self, gaussian_1d):
        """Testa rho limitado e afastado de zero para a gaussiana"""
        report = hole_bounds_check(gaussian_1d, [2.0, 4.0, 8.0])
        assert report.verdict == 'pass'
        assert report.metrics['rho_min'] > 0

    def test_sandwich_excludes_degenerate_laws(self, point_mass_1d):
        """Testa lei degenerada"""
        with pytest.raises(ValidationError):
            hole_bounds_check(point_mass_1d, [1.0, 2.0])

    def test_count_variance_below_volume(self, gaussian_1d):
        """Testa 0 < Var|Pi em B_r| < (2r)^d"""
        result = count_variance_exact(gaussian_1d, 2.0)
        assert 0.0 < result.variance < 4.0
        assert result.ratio == pytest.approx(result.variance / 4.0)

    def test_count_variance_lattice(self, point_mass_1d):
        """Testa variancia nula da rede sem perturbacao"""
        assert count_variance_exact(point_mass_1d, 1.5).variance == 0.0

    def test_remark_bound_gaussian(self, gaussian_1d):
        """Testa familia c r^d log(E(cr)/r) finita para a gaussiana"""
        curve = remark_bound_curve(gaussian_1d, 1.0, [1.0, 2.0])
        assert curve.meta['c'] == '1.0'
        assert np.all(curve.value < 0)

    def test_remark_bound_divergent(self, poly_coord_1d):
        """Testa media truncada infinita"""
        with pytest.raises(DivergentMean):
            remark_bound_curve(poly_coord_1d, 1.0, [2.0])


@pytest.mark.slow
class TestHoleScaling:
    """Escala de -log h(r) nas grades de referencia"""

    @pytest.mark.parametrize('d', [1, 2])
    def test_gaussian_exponent_rises_toward_limit(self, d):
        """Testa inclinacao em (d, d+2) na grade 2..32, maior nas oitavas de cima"""
        curve = hole_curve(GaussianLaw(1.0, d), [2.0, 4.0, 8.0, 16.0, 32.0])
        full = fit_loglog(curve, 'loglog').slope
        top = fit_loglog(curve, 'loglog', r_min=8.0).slope
        assert d < full < d + 2
        assert full < top < d + 2.2

    @pytest.mark.parametrize('d', [1, 2])
    def test_polynomial_ratio_is_flat(self, d):
        """Testa -log h(r) / (r^d log r) com max/min <= 4 para alpha = 2"""
        r_grid = [8.0, 16.0, 32.0, 64.0, 128.0]
        curve = hole_curve(PolynomialCoordinateLaw(alpha=2.0, dimension=d), r_grid)
        r = np.asarray(r_grid)
        ratio = -curve.value / (r ** d * np.log(r))
        assert np.all(ratio > 0)
        assert ratio.max() / ratio.min() <= 4.0


@pytest.mark.unit
class TestAssumptions:
    """Testes dos validadores de hipoteses"""

    def test_integrability_gaussian(self, gaussian_1d):
        """Testa integrabilidade da cauda gaussiana"""
        assert assumption_int_check(gaussian_1d, [1.0, 2.0, 4.0, 8.0]).passed

    def test_integrability_power_law(self, poly_coord_light):
        """Testa razao constante para alpha = 2"""
        report = assumption_int_check(poly_coord_light, [2.0, 4.0, 8.0, 16.0])
        assert report.verdict == 'pass'
        np.testing.assert_allclose(report.metrics['ratio'], 1.0)

    def test_integrability_divergent(self, poly_coord_1d):
        """Testa veredito DivergentIntegral para alpha < 1"""
        assert assumption_int_check(poly_coord_1d, [1.0, 2.0]).verdict == 'DivergentIntegral'

    def test_regularity_gaussian(self, gaussian_1d):
        """Testa razoes log p(kr)/log p(r) finitas e estaveis"""
        report = assumption_reg_check(gaussian_1d, (2, 3))
        assert report.verdict == 'pass'
        assert set(report.metrics['k']) == {'2', '3'}


@pytest.mark.unit
class TestRegression:
    """Testes do ajuste log-log"""

    def test_power_law_slope(self):
        """Testa inclinacao exata de r^-1.5"""
        r = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
        fit = fit_loglog((r, r ** -1.5))
        assert fit.slope == pytest.approx(-1.5, abs=1e-6)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.n_points == 5

    def test_loglog_transform(self):
        """Testa expoente de exp(-r^2) no transformado log(-log)"""
        r = np.array([1.0, 2.0, 3.0, 4.0])
        curve = TailCurve.exact(r, -r ** 2, 'gaussian:sigma=1.0', 1, quantity='log')
        assert fit_loglog(curve, 'loglog').slope == pytest.approx(2.0, abs=1e-6)

    def test_window_restriction(self):
        """Testa recorte r_min/r_max"""
        r = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
        values = np.where(r <= 4, r ** -1.0, r ** -3.0)
        fit = fit_loglog((r, values), r_max=4.0)
        assert fit.slope == pytest.approx(-1.0, abs=1e-6)

    def test_degenerate_fit(self):
        """Testa menos de tres pontos utilizaveis"""
        with pytest.raises(DegenerateFit):
            fit_loglog((np.array([1.0, 2.0, 4.0]), np.array([0.5, 0.0, 0.0])))

    def test_envelope_constant(self):
        """Testa menor C com valor <= C r^-0.6"""
        curve = TailCurve.empirical([1.0, 2.0, 3.0, 10.0], [0.5, 2.0, 5.0], 'x:1', 1)
        expected = max(curve.value * curve.r ** 0.6)
        assert envelope_constant(curve, 0.6) == pytest.approx(expected)


@pytest.mark.unit
class TestTailCurve:
    """Testes de TailCurve"""

    def test_empirical_strict_and_weak(self):
        """Testa P(X > r) e P(X >= r) com NaN descartado"""
        samples = [1.0, 2.0, 3.0, 4.0, np.nan]
        strict = TailCurve.empirical(samples, [2.0], 'x:1', 1)
        weak = TailCurve.empirical(samples, [2.0], 'x:1', 1, strict=False)
        assert strict.value[0] == 0.5
        assert weak.value[0] == 0.75
        assert strict.trials == 4
        assert strict.stderr[0] == pytest.approx(math.sqrt(0.25 / 4))

    def test_probability_range(self):
        """Testa probabilidade fora de [0, 1]"""
        with pytest.raises(ValidationError):
            TailCurve.exact([1.0], [1.5], 'x:1', 1)

    def test_increasing_abscissae(self):
        """Testa grade fora de ordem"""
        with pytest.raises(ValidationError):
            TailCurve.exact([2.0, 1.0], [0.1, 0.2], 'x:1', 1)

    def test_exact_has_no_stderr(self):
        """Testa curva exata com erro padrao"""
        with pytest.raises(ValidationError):
            TailCurve([1.0], [0.5], [0.1], 'exact', 'x:1', 1)

    def test_empty_samples(self):
        """Testa cauda empirica sem amostras"""
        with pytest.raises(ValidationError):
            TailCurve.empirical([np.nan], [1.0], 'x:1', 1)


@pytest.mark.unit
class TestReportsAndExport:
    """Testes de relatorios e arquivos"""

    def test_unknown_verdict(self):
        """Testa veredito fora da lista"""
        with pytest.raises(ValueError):
            CheckReport('x', 'maybe', 'x:1', 1)

    def test_to_jsonable(self):
        """Testa numpy e nao finitos"""
        value = to_jsonable({'a': np.float64(1.5), 'b': np.array([1, 2]), 'c': math.inf})
        assert value == {'a': 1.5, 'b': [1, 2], 'c': 'inf'}

    def test_tail_csv_keeps_every_bit(self, tmp_path):
        """Testa 17 digitos significativos e hash na primeira linha"""
        curve = TailCurve([1.0, 2.0], [1 / 3, 0.1], [0.01, 0.02], 'monte-carlo',
                          'gaussian:sigma=1.0', 1, trials=9, seed=4)
        path = write_tail_csv(curve, tmp_path / 'tail.csv', config_hash='0123abcd')
        assert path.read_text(encoding='utf-8').startswith('# config_hash=0123abcd\n')
        loaded, config_hash = read_tail_csv(path)
        assert config_hash == '0123abcd'
        np.testing.assert_array_equal(loaded.value, curve.value)
        assert loaded.seed == 4 and loaded.trials == 9

    def test_report_header(self, tmp_path):
        """Testa hash no cabecalho e chaves ordenadas"""
        path = write_report({'z': 1, 'a': np.nan}, tmp_path / 'report.json', 'h1',
                            {'generated_at': 'now'})
        document = json.loads(path.read_text(encoding='utf-8'))
        assert document['header'] == {'config_hash': 'h1', 'generated_at': 'now'}
        assert document['report'] == {'a': 'nan', 'z': 1}


@pytest.mark.unit
class TestRadiusTail:
    """Testes da cauda do raio da cobertura"""

    def test_center_radius_point_mass(self, point_mass_1d):
        """Testa R0 = R = 1 sem perturbacao"""
        assert center_radius(0, point_mass_1d, 8) == (1.0, 1.0)

    def test_point_mass_tail_passes(self, point_mass_1d):
        """Testa cauda nula para a lei degenerada"""
        report = radius_tail_vs_hole(point_mass_1d, 8, 3, [1.0, 2.0], seed=0, workers=1)
        assert report.verdict == 'pass'
        assert 'log_h' not in report.curves
