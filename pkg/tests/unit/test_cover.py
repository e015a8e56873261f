# tests/unit/test_cover.py
"""
Testes unitarios para a cobertura regular multiescala
Cruzamentos, campos de escala, montagem e verificacao das propriedades
"""

import json
from itertools import product

import numpy as np
import pytest

from core.errors import MarginInsufficient, ValidationError
from cover import (
    CoverFields,
    assemble_cover,
    build_cover,
    ceil_log2,
    cover_to_dict,
    cover_trial,
    crossing_counts,
    crossing_set,
    default_margin,
    reach_probability_bound,
    save_cover,
    scale_cap,
    smooth_field,
    verify_cover_properties,
)
from geometry import DyadicBox
from process import GaussianLaw, PointMassLaw, WindowRealization, sample_realization


def two_jumps():
    """Sitios 0 e 1 saltam para 5 e 6: quatro caixas unitarias cruzadas duas vezes"""
    return WindowRealization.from_overrides(8, 8, 1, {(0,): [5.0], (1,): [6.0]})


@pytest.mark.unit
class TestCrossings:
    """Testes dos conjuntos de cruzamento"""

    def test_identity_has_no_crossings(self, identity_window_2d):
        """Testa que Pi_v = v nao cruza caixa alguma"""
        for scale in range(3):
            counts = crossing_counts(identity_window_2d, scale)
            assert int(counts.counts.sum()) == 0

    def test_crossing_set_excludes_landing_box(self):
        """Testa que o sitio nao cruza a caixa onde seu ponto cai"""
        window = two_jumps()
        assert crossing_set(window, DyadicBox(0, (5,))).tolist() == [[1]]
        assert crossing_set(window, DyadicBox(0, (0,))).tolist() == [[0]]
        assert crossing_set(window, DyadicBox(0, (3,))).tolist() == [[0], [1]]

    def test_scale_counts_match_direct_enumeration(self, gaussian_window):
        """Testa contagens vetorizadas contra a enumeracao por caixa"""
        counts = crossing_counts(gaussian_window, 1)
        for corner in range(-16, 16, 2):
            box = DyadicBox(1, (corner,))
            direct = crossing_set(gaussian_window, box).shape[0]
            assert int(counts.count_at(np.array([[corner]]))[0]) == direct

    def test_reach_bound_vanishes_for_point_mass(self, point_mass_1d):
        """Testa cota de alcance nula sem perturbacao"""
        assert reach_probability_bound(point_mass_1d, 3.0, 4, 1) == 0.0

    def test_reach_bound_decreases_with_gap(self, gaussian_1d):
        """Testa cota monotona na distancia ate a borda"""
        near = reach_probability_bound(gaussian_1d, 2.0, 4, 1)
        far = reach_probability_bound(gaussian_1d, 8.0, 4, 1)
        assert far < near

    @pytest.mark.parametrize('d,scale', [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
    def test_crossings_refine_under_subdivision(self, d, scale):
        """Testa C(Q_i) contido na uniao de C(Q_{i-1}) sobre as caixas filhas"""
        window = sample_realization(GaussianLaw(1.5, d), 4, 4, seed=11)
        side, half = 1 << scale, 1 << (scale - 1)
        corners = range(-8, 8, side)
        for corner in product(corners, repeat=d):
            parent = {tuple(v) for v in crossing_set(window, DyadicBox(scale, corner)).tolist()}
            children = set()
            for offset in product((0, half), repeat=d):
                child = DyadicBox(scale - 1, tuple(c + o for c, o in zip(corner, offset)))
                children |= {tuple(v) for v in crossing_set(window, child).tolist()}
            assert parent <= children, f"box {corner} at scale {scale}"


@pytest.mark.unit
class TestScaleFields:
    """Testes dos campos I0, I1 e I"""

    def test_scale_cap(self):
        """Testa i_max = floor(log2 L) - 1"""
        assert scale_cap(1) == 0
        assert scale_cap(8) == 2
        assert scale_cap(100) == 5

    def test_ceil_log2_exact_powers(self):
        """Testa ceil(log2 x) sem erro de arredondamento em potencias de 2"""
        np.testing.assert_array_equal(ceil_log2([1.0, 1.25, 2.0, 3.0, 4.0, 1024.0]),
                                      [0, 1, 1, 2, 2, 10])

    def test_smooth_field_decay(self):
        """Testa R1 = max(R0_u - |u - v|/4) em torno de um pico"""
        R0 = np.ones(9)
        R0[4] = 4.0
        R1, I1 = smooth_field(R0)
        np.testing.assert_allclose(R1, [3.0, 3.25, 3.5, 3.75, 4.0, 3.75, 3.5, 3.25, 3.0])
        np.testing.assert_array_equal(I1, 2)

    def test_assemble_cover_takes_maximum(self):
        """Testa que I_v e a maior escala cuja caixa contem v"""
        I1 = np.zeros(9, dtype=np.int64)
        I1[5] = 2
        I = assemble_cover(I1)
        # extensao 4: sitio 5 -> v = 1, caixa de escala 2 cobre 0..3
        np.testing.assert_array_equal(I, [0, 0, 0, 0, 2, 2, 2, 2, 0])

    def test_two_jumps_raise_scale(self):
        """Testa I0 = 1 onde duas trajetorias cruzam a mesma caixa unitaria"""
        fields = build_cover(two_jumps())
        I0 = {int(v): int(i) for v, i in zip(fields.sites[:, 0], fields.I0)}
        assert [I0[v] for v in range(0, 6)] == [0, 1, 1, 1, 1, 0]
        assert fields.box_of([1]) == DyadicBox(1, (0,))

    def test_point_mass_cover_is_unit_boxes(self, point_mass_2d):
        """Testa cobertura trivial sem perturbacao"""
        realization, fields = cover_trial(point_mass_2d, 8, seed=0)
        assert np.all(fields.I == 0)
        assert realization.margin == default_margin(point_mass_2d, 8) == 8

    def test_margin_too_small(self):
        """Testa MarginInsufficient quando a zona de influencia sai da janela"""
        window = WindowRealization.from_overrides(8, 0, 1, {(0,): [5.0], (1,): [6.0]})
        with pytest.raises(MarginInsufficient):
            build_cover(window)

    def test_from_scales_size_check(self):
        """Testa campo de escalas com tamanho errado"""
        with pytest.raises(ValidationError):
            CoverFields.from_scales(4, 8, 1, np.zeros(5))

    @pytest.mark.parametrize('d,seed', [(1, 2), (1, 9), (2, 5)])
    def test_smoothed_radius_is_lipschitz(self, d, seed):
        """Testa |R1_u - R1_v| <= ||u - v|| / 4 em coberturas amostradas"""
        _, fields = cover_trial(GaussianLaw(1.5, d), 8, seed=seed)
        gaps = np.abs(fields.R1[:, None] - fields.R1[None, :])
        dist = np.max(np.abs(fields.sites[:, None, :] - fields.sites[None, :, :]), axis=2)
        assert np.all(gaps <= 0.25 * dist + 1e-12)
        assert np.all(fields.R1 >= fields.R0)

    def test_smooth_field_lipschitz_on_random_grid(self):
        """Testa a mesma propriedade direto em niveis aleatorios 2^k"""
        rng = np.random.default_rng(0)
        R0 = np.left_shift(1, rng.integers(0, 4, size=(9, 9))).astype(np.float64)
        R1, _ = smooth_field(R0)
        coords = np.stack(np.meshgrid(np.arange(9), np.arange(9), indexing='ij'), axis=-1).reshape(-1, 2)
        flat = R1.reshape(-1)
        dist = np.max(np.abs(coords[:, None, :] - coords[None, :, :]), axis=2)
        assert np.all(np.abs(flat[:, None] - flat[None, :]) <= 0.25 * dist + 1e-12)


@pytest.mark.unit
class TestCoverVerification:
    """Testes da verificacao das propriedades"""

    @pytest.fixture(autouse=True)
    def setup(self):
        """Realizacao identidade em d = 1 com nucleo 4 e extensao 8"""
        self.identity = WindowRealization.from_overrides(4, 4, 1, {})

    def test_valid_cover(self):
        """Testa cobertura exata da realizacao com dois saltos"""
        window = two_jumps()
        report = verify_cover_properties(window, build_cover(window))
        assert report.all_ok
        assert report.violations == []

    def test_partition_violation(self):
        """Testa sitio coberto por duas caixas"""
        I = np.zeros(17, dtype=np.int64)
        I[9] = 1  # v = 1 -> caixa [0, 1], sobreposta a {0}
        report = verify_cover_properties(self.identity, CoverFields.from_scales(4, 8, 1, I))
        assert not report.partition_ok
        assert any(v['property'] == 'partition' for v in report.violations)

    def test_diameter_violation(self):
        """Testa caixas vizinhas com escalas distantes"""
        I = np.zeros(17, dtype=np.int64)
        I[8:12] = 2  # v = 0..3 -> caixa de escala 2 ao lado de {4}
        report = verify_cover_properties(self.identity, CoverFields.from_scales(4, 8, 1, I))
        assert report.partition_ok
        assert not report.diameter_ok

    def test_crossing_violation(self):
        """Testa caixa unitaria cruzada duas vezes"""
        window = WindowRealization.from_overrides(4, 4, 1, {(0,): [5.0], (1,): [6.0]})
        report = verify_cover_properties(window, CoverFields.from_scales(4, 8, 1, np.zeros(17)))
        assert not report.crossing_ok
        assert report.to_dict()['all_ok'] is False

    @pytest.mark.parametrize('seed', [1, 2, 3])
    def test_gaussian_cover_properties(self, seed):
        """Testa as tres propriedades em janelas gaussianas amostradas"""
        realization, fields = cover_trial(GaussianLaw(1.0, 1), 16, seed=seed)
        report = verify_cover_properties(realization, fields)
        assert report.all_ok, report.violations


@pytest.mark.unit
class TestCoverExport:
    """Testes da exportacao JSON"""

    def test_save_cover(self, tmp_path):
        """Testa registros do nucleo e hash da configuracao"""
        fields = build_cover(two_jumps())
        path = save_cover(fields, tmp_path / 'cover.json', config_hash='abc123')
        payload = json.loads(path.read_text(encoding='utf-8'))
        assert payload['config_hash'] == 'abc123'
        assert len(payload['sites']) == 17
        assert {'scale': 1, 'corner': [0]} in payload['boxes']

    def test_cover_to_dict_without_hash(self):
        """Testa dicionario sem hash"""
        fields = build_cover(sample_realization(PointMassLaw((0.0,)), 4, 8, seed=0))
        assert 'config_hash' not in cover_to_dict(fields)
