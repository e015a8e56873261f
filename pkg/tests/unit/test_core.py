# tests/unit/test_core.py
"""
Testes unitarios para a infraestrutura comum
Erros, configuracao, retry de margem, pool de tentativas, logging e metricas
"""

import json
import logging

import pytest

from core.config import Config
from core.errors import (
    AllMisses,
    DivergentMean,
    LatticeError,
    MarginInsufficient,
    RegionTooLarge,
    ValidationError,
)
from core.logging_config import JSONFormatter, get_logger_with_context, log_trial_batch
from core.retry_handler import retry_with_custom_strategy, retry_with_margin_doubling
from core.trial_pool import TrialPool
from monitoring import TrialMetricsCollector, track_latency


def _square(seed, offset=0):
    return seed * seed + offset


def _batch_sum(batch, scale=1):
    return int(sum(int(s) for s in batch)) * scale


@pytest.mark.unit
class TestErrors:
    """Testes da hierarquia de erros"""

    @pytest.mark.parametrize('error_cls,code,category', [
        (ValidationError, 2, 'validation'),
        (RegionTooLarge, 2, 'validation'),
        (DivergentMean, 3, 'model'),
        (MarginInsufficient, 3, 'model'),
        (AllMisses, 4, 'unresolvable'),
    ])
    def test_exit_codes(self, error_cls, code, category):
        """Testa codigo de saida e categoria por classe"""
        error = error_cls("boom")
        assert error.exit_code == code
        assert error.category == category
        assert isinstance(error, LatticeError)

    def test_to_record(self):
        """Testa registro serializavel com detalhes convertidos"""
        error = ValidationError("bad grid", grid=(1.0, 2.0), path=object())
        record = error.to_record()
        assert record['error'] == 'ValidationError'
        assert record['exit_code'] == 2
        assert record['details']['grid'] == [1.0, 2.0]
        assert isinstance(record['details']['path'], str)
        json.dumps(record)

    def test_margin_insufficient_keeps_margin(self):
        """Testa margem no atributo e nos detalhes"""
        error = MarginInsufficient("too thin", margin=16, needed=40)
        assert error.margin == 16
        assert error.details == {'margin': 16, 'needed': 40}


@pytest.mark.unit
class TestConfig:
    """Testes da configuracao por ambiente"""

    def test_runner_from_env(self, monkeypatch, tmp_path):
        """Testa leitura das variaveis PLATTICE_*"""
        monkeypatch.setenv('PLATTICE_OUTPUT_DIR', str(tmp_path / 'out'))
        monkeypatch.setenv('PLATTICE_WORKERS', '3')
        Config.reset()
        runner = Config.runner()
        assert runner.output_dir == tmp_path / 'out'
        assert runner.workers == 3

    def test_numerics_defaults(self, monkeypatch):
        """Testa tolerancias padrao"""
        for name in ('PLATTICE_AUDIT_TOL', 'PLATTICE_HOLE_TOL', 'PLATTICE_MARGIN_RETRIES'):
            monkeypatch.delenv(name, raising=False)
        Config.reset()
        numerics = Config.numerics()
        assert numerics.audit_tolerance == 1e-9
        assert numerics.hole_tolerance == 1e-6
        assert numerics.max_margin_retries == 3

    def test_singleton_until_reset(self, monkeypatch):
        """Testa cache da configuracao"""
        first = Config.numerics()
        monkeypatch.setenv('PLATTICE_HOLE_TOL', '1e-3')
        assert Config.numerics() is first
        Config.reset()
        assert Config.numerics().hole_tolerance == 1e-3


@pytest.mark.unit
class TestRetry:
    """Testes do retry com dobra de margem"""

    def test_margin_doubles_until_success(self):
        """Testa margens 8 -> 16 -> 32"""
        seen = []

        @retry_with_margin_doubling(max_retries=3)
        def build(margin):
            seen.append(margin)
            if margin < 32:
                raise MarginInsufficient("thin", margin=margin)
            return margin

        assert build(margin=8) == 32
        assert seen == [8, 16, 32]

    def test_gives_up_after_max_retries(self):
        """Testa propagacao apos esgotar as tentativas"""
        calls = []

        @retry_with_margin_doubling(max_retries=1)
        def build(margin):
            calls.append(margin)
            raise MarginInsufficient("thin", margin=margin)

        with pytest.raises(MarginInsufficient):
            build(margin=8)
        assert calls == [8, 16]

    def test_other_errors_not_retried(self):
        """Testa que erros alheios a margem sobem na primeira vez"""
        calls = []

        @retry_with_custom_strategy(lambda e, n: isinstance(e, MarginInsufficient),
                                    lambda kw, e, n: kw)
        def build(margin):
            calls.append(margin)
            raise ValidationError("bad")

        with pytest.raises(ValidationError):
            build(margin=8)
        assert calls == [8]


@pytest.mark.unit
class TestTrialPool:
    """Testes do pool de tentativas"""

    @pytest.mark.parametrize('workers,batch_size', [(1, 256), (1, 3), (2, 3)])
    def test_order_independent_of_partition(self, workers, batch_size):
        """Testa resultados na ordem das sementes"""
        pool = TrialPool(workers=workers, batch_size=batch_size)
        assert pool.map(_square, list(range(10)), offset=1) == [s * s + 1 for s in range(10)]

    def test_batches(self):
        """Testa particionamento em lotes contiguos"""
        pool = TrialPool(workers=1, batch_size=4)
        assert [len(b) for b in pool.batches(range(10))] == [4, 4, 2]
        assert pool.map_batches(_batch_sum, pool.batches(range(10)), scale=2) == [12, 44, 34]

    def test_workers_from_config(self, monkeypatch):
        """Testa workers padrao vindos do ambiente"""
        monkeypatch.setenv('PLATTICE_WORKERS', '0')
        Config.reset()
        assert TrialPool().workers == 1


@pytest.mark.unit
class TestLogging:
    """Testes do logging estruturado"""

    def _record(self, **extra):
        record = logging.LogRecord('plattice.test', logging.INFO, __file__, 10,
                                   'batch %s', ('done',), None)
        for key, value in extra.items():
            setattr(record, key, value)
        return record

    def test_json_formatter_context(self):
        """Testa campos de contexto no JSON"""
        line = JSONFormatter().format(self._record(subcommand='hole-exact', seed=7, ignored=1))
        payload = json.loads(line)
        assert payload['message'] == 'batch done'
        assert payload['subcommand'] == 'hole-exact'
        assert payload['seed'] == 7
        assert 'ignored' not in payload

    def test_context_adapter(self, caplog):
        """Testa contexto fixo anexado pelo adapter"""
        logger = get_logger_with_context('plattice.test', subcommand='cover-verify')
        with caplog.at_level(logging.INFO):
            logger.info("started", extra={'seed': 3})
        record = caplog.records[-1]
        assert record.subcommand == 'cover-verify'
        assert record.seed == 3

    def test_log_trial_batch(self, caplog):
        """Testa registro de lote de tentativas"""
        with caplog.at_level(logging.INFO):
            log_trial_batch(logging.getLogger('plattice.test'), 'match-tail', 100, 1.23456, 2)
        record = caplog.records[-1]
        assert record.trials == 100
        assert record.elapsed == 1.235
        assert record.flagged == 2
        assert '2 flagged' in record.getMessage()
        assert json.loads(JSONFormatter().format(record))['flagged'] == 2


@pytest.mark.unit
class TestMetrics:
    """Testes do coletor de metricas"""

    def test_summary(self):
        """Testa contagens e taxa de sucesso"""
        collector = TrialMetricsCollector('hole-mc')
        collector.record_trials(10, success=8, flagged=1)
        collector.record_retry()
        collector.record_error(AllMisses("none"))
        summary = collector.get_summary()
        assert summary['trials_total'] == 10
        assert summary['success_rate'] == 0.8
        assert summary['retries'] == 1
        assert summary['errors'] == {'AllMisses': 1}

    def test_track_latency_records_errors(self):
        """Testa erro contado e relancado pelo decorador"""
        collector = TrialMetricsCollector()

        @track_latency(collector, 'failing')
        def failing():
            raise ValidationError("bad")

        with pytest.raises(ValidationError):
            failing()
        summary = collector.get_summary()
        assert summary['errors'] == {'ValidationError': 1}
        assert summary['elapsed_ms'] >= 0.0
        assert summary['success_rate'] is None
