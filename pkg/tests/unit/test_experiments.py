# tests/unit/test_experiments.py
"""
Testes de integracao da CLI e do orquestrador de experimentos
Arquivos gravados, hash de configuracao e codigos de saida
"""

import json
import logging

import pytest

from analytics import read_table_csv
from core.errors import MarginInsufficient
from experiments import ExperimentRunner, main
from schemas import ExperimentConfig


@pytest.mark.integration
class TestCli:
    """Execucoes completas de subcomandos pela CLI"""

    @pytest.fixture(autouse=True)
    def setup(self, tmp_path):
        """Diretorios temporarios e handlers de log restaurados ao final"""
        self.out = tmp_path / 'out'
        self.logs = tmp_path / 'logs'
        root = logging.getLogger()
        handlers, level = list(root.handlers), root.level
        yield
        for handler in root.handlers:
            if handler not in handlers:
                handler.close()
        root.handlers[:] = handlers
        root.setLevel(level)

    def _run(self, *argv, out=None):
        return main([*argv, '--out', str(out or self.out), '--log-dir', str(self.logs)])

    # ============================================
    # TESTES - SUCESSO
    # ============================================

    def test_hole_exact_writes_files(self):
        """Testa config, curva e relatorio com o mesmo hash"""
        code = self._run('hole-exact', '--law', 'gaussian:sigma=1', '--d', '1', '--r', '1,2,4')
        assert code == 0

        config = json.loads((self.out / 'hole-exact_config.json').read_text(encoding='utf-8'))
        meta, columns, rows = read_table_csv(self.out / 'hole-exact_log_h.csv')
        report = json.loads((self.out / 'hole-exact_report.json').read_text(encoding='utf-8'))

        assert meta['config_hash'] == config['config_hash'] == report['header']['config_hash']
        assert columns[:3] == ['r', 'value', 'stderr']
        assert [row[0] for row in rows] == ['1', '2', '4']
        assert report['report']['loglog_fit']['n_points'] == 3

    def test_config_file_reproduces_output(self, tmp_path):
        """Testa que o JSON gravado reproduz o CSV bit a bit"""
        assert self._run('hole-exact', '--law', 'gaussian:sigma=2', '--r', '1,2,4') == 0
        again = tmp_path / 'again'
        code = self._run('hole-exact', '--config', str(self.out / 'hole-exact_config.json'),
                         out=again)
        assert code == 0
        first = (self.out / 'hole-exact_log_h.csv').read_bytes()
        assert (again / 'hole-exact_log_h.csv').read_bytes() == first

    def test_cover_verify_point_mass(self):
        """Testa veredito pass e artefatos da primeira tentativa"""
        code = self._run('cover-verify', '--law', 'pointmass:0', '--d', '1', '--L', '8',
                         '--trials', '2', '--seed', '1')
        assert code == 0
        report = json.loads((self.out / 'cover-verify_report.json').read_text(encoding='utf-8'))
        assert report['report']['verdict'] == 'pass'
        assert report['header']['metrics']['trials_total'] == 2
        assert (self.out / 'cover-verify_cover_trial0.json').exists()
        assert (self.out / 'cover-verify_matching_trial0.csv').exists()

    def test_oned_variance(self):
        """Testa balanco de fluxo e tabela auxiliar"""
        code = self._run('oned-variance', '--law', 'gaussian:sigma=1', '--t', '1,2,4')
        assert code == 0
        report = json.loads((self.out / 'oned-variance_report.json').read_text(encoding='utf-8'))
        assert report['report']['verdict'] == 'pass'
        _, columns, rows = read_table_csv(self.out / 'oned-variance_flow_balance.csv')
        assert columns == ['t', 'outgoing', 'incoming', 'relative_gap']
        assert len(rows) == 3

    def test_schemas(self):
        assert self._run('schemas') == 0
        schemas = json.loads((self.out / 'schemas_schemas.json').read_text(encoding='utf-8'))
        assert 'ExperimentConfig' in schemas

    # ============================================
    # TESTES - FALHAS
    # ============================================

    def test_invalid_law_exits_2(self, capsys):
        """Testa configuracao invalida sem execucao"""
        code = self._run('hole-exact', '--law', 'bogus:x=1')
        assert code == 2
        lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith('{')]
        record = json.loads(lines[-1])
        assert record['error'] == 'ValidationError'
        assert not (self.out / 'hole-exact_config.json').exists()

    def test_oned_command_in_2d_exits_2(self):
        """Testa registro de erro para subcomando 1D em d = 2"""
        code = self._run('oned-tail', '--law', 'gaussian:sigma=1', '--d', '2', '--trials', '5')
        assert code == 2
        record = json.loads((self.out / 'oned-tail_error.json').read_text(encoding='utf-8'))
        assert record['exit_code'] == 2
        assert len(record['config_hash']) == 16
        assert not (self.out / 'oned-tail_report.json').exists()

    def test_all_misses_exits_4(self):
        """Testa buraco raro demais em todos os raios"""
        code = self._run('hole-mc', '--law', 'gaussian:sigma=1', '--r', '8', '--trials', '5')
        assert code == 4
        record = json.loads((self.out / 'hole-mc_error.json').read_text(encoding='utf-8'))
        assert record['category'] == 'unresolvable'


@pytest.mark.integration
class TestExperimentRunner:
    """Orquestrador chamado diretamente"""

    def test_model_error_exit_code(self, mocker, tmp_path):
        """Testa MarginInsufficient propagado como saida 3"""
        failing = mocker.Mock(side_effect=MarginInsufficient("thin window", margin=8))
        mocker.patch.dict('experiments.commands.COMMANDS', {'hole-exact': failing})
        runner = ExperimentRunner(ExperimentConfig(subcommand='hole-exact'), tmp_path)
        assert runner.run() == 3
        record = json.loads(runner.error_path.read_text(encoding='utf-8'))
        assert record['error'] == 'MarginInsufficient'
        assert record['details'] == {'margin': 8}
        assert runner.metrics.get_summary()['errors'] == {'MarginInsufficient': 1}

    def test_default_output_dir(self, tmp_path):
        """Testa diretorio vindo de PLATTICE_OUTPUT_DIR"""
        output_dir = tmp_path / 'results'
        runner = ExperimentRunner(ExperimentConfig(subcommand='count-variance', r_grid='1,2'))
        assert runner.out_dir == output_dir
        assert runner.run() == 0
        assert (output_dir / 'count-variance_count_variance.csv').exists()
