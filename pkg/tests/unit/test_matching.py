# tests/unit/test_matching.py
"""
Testes unitarios para o emparelhamento sitio -> ponto
Hopcroft-Karp, vizinhancas da cobertura, condicao de Hall e resultado exportado
"""

import numpy as np
import pytest

from analytics import read_table_csv
from core.errors import RegionTooLarge
from cover import CoverFields, build_cover, cover_trial
from matching import (
    NIL,
    BipartiteGraph,
    HopcroftKarp,
    MatchResult,
    canonical_matching,
    center_statistics,
    distance_bound_holds,
    hall_check_bruteforce,
    match_tail_curve,
    match_window,
    maximum_matching,
    maximum_region_matching,
    neighborhood,
    region_bounds,
)
from geometry import DyadicBox
from process import GaussianLaw, PointMassLaw, WindowRealization, sample_realization


@pytest.mark.unit
class TestHopcroftKarp:
    """Testes do emparelhamento bipartido maximo"""

    def test_perfect_matching_needs_augmentation(self):
        """Testa caminho aumentante apos o passe guloso"""
        partner = maximum_matching(3, 3, [[0, 1], [0], [1, 2]])
        assert NIL not in partner
        assert len(set(partner)) == 3

    def test_deficient_graph(self):
        """Testa grafo sem emparelhamento perfeito"""
        partner = maximum_matching(3, 2, [[0], [0], [1]])
        assert sum(p != NIL for p in partner) == 2

    def test_preference_order_respected(self):
        """Testa que o guloso segue a ordem das adjacencias"""
        solver = HopcroftKarp(BipartiteGraph.from_edges(2, 2, [(0, 1), (0, 0), (1, 0)]))
        pairs = solver()
        assert pairs == [(0, 1), (1, 0)]

    def test_invalid_edges(self):
        """Testa vertice direito fora do intervalo"""
        with pytest.raises(ValueError):
            BipartiteGraph(1, 2, [[5]])


@pytest.mark.unit
class TestCoverMatching:
    """Testes do emparelhamento sobre as vizinhancas"""

    def test_identity_matches_every_site_to_itself(self, identity_window_2d):
        """Testa M(v) = v com perturbacao nula"""
        fields = build_cover(identity_window_2d)
        result = match_window(identity_window_2d, fields)
        assert result.size == 17 * 17
        np.testing.assert_array_equal(result.distances, 0.0)
        np.testing.assert_array_equal(result.labels, result.sites)

    def test_two_jumps_matching(self):
        """Testa injetividade e cota 3R numa realizacao com saltos"""
        window = WindowRealization.from_overrides(8, 8, 1, {(0,): [5.0], (1,): [6.0]})
        fields = build_cover(window)
        result = match_window(window, fields)
        assert result.is_injective()
        assert distance_bound_holds(result, fields)
        assert result.label_of([0]) is not None

    def test_neighborhood_contains_own_box(self):
        """Testa que N_v inclui D_v e as caixas que a tocam"""
        window = WindowRealization.from_overrides(8, 8, 1, {(0,): [5.0], (1,): [6.0]})
        fields = build_cover(window)
        boxes = neighborhood(fields, [1])
        assert DyadicBox(1, (0,)) in boxes
        lower, upper = region_bounds(boxes)
        assert lower[0] == -2.5 and upper[0] == 3.5

    def test_gaussian_window_is_saturated(self):
        """Testa emparelhamento amostrado sem sitio profundo livre"""
        realization, fields = cover_trial(GaussianLaw(1.0, 1), 16, seed=4)
        result = match_window(realization, fields)
        assert result.is_injective()
        assert distance_bound_holds(result, fields)

    def test_distance_bound_violation_flagged(self):
        """Testa contagem de sitios alem de 3R: caixa unitaria de -1 toca a de escala 3"""
        overrides = {(k,): [100.0] for k in range(-8, 9) if k != 0}
        overrides[(0,)] = [6.0]
        window = WindowRealization.from_overrides(4, 4, 1, overrides)
        # sitios -8..-1 e 8 em caixas unitarias; 0..7 numa caixa de lado 8
        scales = np.array([0] * 8 + [3] * 8 + [0])
        fields = CoverFields.from_scales(4, 8, 1, scales)
        result = match_window(window, fields)
        assert result.size == 1
        assert result.distance_of([-1]) == 7.0
        assert result.bound_violations == 1
        assert not distance_bound_holds(result, fields)

    def test_sampled_matching_has_no_violations(self):
        """Testa bound_violations = 0 numa cobertura de verdade"""
        realization, fields = cover_trial(GaussianLaw(1.0, 1), 16, seed=4)
        assert match_window(realization, fields).bound_violations == 0

    def test_canonical_matching(self, gaussian_window):
        """Testa M0(v) = Pi_v e distancias ||xi_v||"""
        result = canonical_matching(gaussian_window)
        assert result.method == 'canonical'
        expected = np.abs(gaussian_window.displacements[gaussian_window.core_mask(), 0])
        np.testing.assert_allclose(result.distances, expected)

    def test_center_statistics_point_mass(self, point_mass_1d):
        """Testa estatisticas do centro sem perturbacao"""
        stats = center_statistics(3, point_mass_1d, 8)
        assert stats['distance'] == 0.0
        assert stats['canonical'] == 0.0
        assert stats['R'] == 1.0
        assert stats['cover_ok'] and stats['distance_ok']


@pytest.mark.unit
class TestHallCondition:
    """Testes da verificacao exaustiva de Hall"""

    @pytest.fixture(autouse=True)
    def setup(self):
        """Sitios 0, 1 e 2 mandam seus pontos para 8; caixas unitarias"""
        self.window = WindowRealization.from_overrides(
            4, 4, 1, {(0,): [8.0], (1,): [8.0], (2,): [8.0]}
        )
        self.fields = CoverFields.from_scales(4, 8, 1, np.zeros(17))

    def test_violation_detected(self):
        """Testa |N(A)| < |A| para A = {0, 1}"""
        assert not hall_check_bruteforce(self.window, self.fields, [[0], [1]])

    def test_condition_holds_far_away(self):
        """Testa regiao longe dos saltos"""
        assert hall_check_bruteforce(self.window, self.fields, [[-3], [-4]])

    def test_region_matching_is_deficient(self):
        """Testa que o emparelhamento maximo da regiao fica incompleto"""
        result = maximum_region_matching(self.window, self.fields, [[0], [1]])
        assert result.size == 1

    def test_hall_agrees_with_maximum_matching(self):
        """Testa Hall <=> regiao saturada em 50 janelas sorteadas"""
        law = GaussianLaw(sigma=2.0, dimension=1)
        seen = set()
        for seed in range(50):
            window = sample_realization(law, 8, 8, seed)
            fields = CoverFields.from_scales(8, 16, 1, np.zeros(33))
            rng = np.random.default_rng(seed)
            size = int(rng.integers(1, 9))
            region = rng.choice(np.arange(-8, 9), size=size, replace=False).reshape(-1, 1)
            hall = hall_check_bruteforce(window, fields, region)
            saturated = maximum_region_matching(window, fields, region).size == size
            assert hall == saturated, f"seed {seed}"
            seen.add(hall)
        assert seen == {True, False}

    def test_region_too_large(self):
        """Testa teto da enumeracao exaustiva"""
        region = np.arange(-8, 9).reshape(-1, 1)
        region = np.concatenate([region, region[:4]])
        with pytest.raises(RegionTooLarge):
            hall_check_bruteforce(self.window, self.fields, region)


@pytest.mark.unit
class TestMatchResult:
    """Testes do resultado exportado"""

    @pytest.fixture(autouse=True)
    def setup(self):
        sites = np.array([[0], [1], [2]])
        self.result = MatchResult(sites, np.array([[1], [0], [0]]), np.array([[1.5], [0.25], [0.0]]),
                                  np.array([True, True, False]),
                                  np.array([1.5, 0.75, np.nan]), 'cover-neighborhood')

    def test_unknown_method(self):
        """Testa metodo desconhecido"""
        with pytest.raises(ValueError):
            MatchResult(np.zeros((0, 1)), np.zeros((0, 1)), np.zeros((0, 1)),
                        np.zeros(0, dtype=bool), np.zeros(0), 'greedy')

    def test_lookups(self):
        """Testa distancia, rotulo e sitios livres"""
        assert self.result.distance_of([0]) == 1.5
        assert self.result.label_of([1]) == (0,)
        assert self.result.label_of([2]) is None
        assert self.result.unmatched_sites.tolist() == [[2]]
        assert self.result.is_injective()

    def test_missing_site(self):
        """Testa sitio fora da regiao"""
        with pytest.raises(KeyError):
            self.result.distance_of([7])

    def test_to_csv(self, tmp_path):
        """Testa CSV apenas com sitios emparelhados"""
        path = self.result.to_csv(tmp_path / 'matching.csv', config_hash='feedbeef')
        meta, columns, rows = read_table_csv(path)
        assert meta['config_hash'] == 'feedbeef'
        assert columns == ['v_0', 'label_0', 'distance']
        assert rows == [['0', '1', '1.5'], ['1', '0', '0.75']]


@pytest.mark.integration
class TestMatchTail:
    """Cauda do centro com poucas tentativas"""

    def test_point_mass_tail_is_zero(self):
        """Testa curvas nulas sem perturbacao"""
        report = match_tail_curve(PointMassLaw((0.0,)), 8, 4, [0.5, 1.0], seed=1, workers=1)
        np.testing.assert_array_equal(report.cover_tail.value, 0.0)
        np.testing.assert_array_equal(report.exact_tail.value, 0.0)
        assert report.hole is None
        assert report.all_ok
        assert set(report.curves()) == {'cover', 'canonical', 'exact_p'}
