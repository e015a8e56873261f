# src/experiments/runner.py
"""
Orquestrador de experimentos

Executa um subcomando a partir de um ExperimentConfig validado e grava:

    <out>/<subcomando>_config.json    configuração resolvida + hash
    <out>/<subcomando>_<curva>.csv    curvas de cauda
    <out>/<subcomando>_<tabela>.csv   tabelas auxiliares
    <out>/<subcomando>_report.json    relatório (tempos só no cabeçalho)
    <out>/<subcomando>_error.json     registro de erro (saída não nula)
"""

import json
import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from core.config import Config
from core.errors import LatticeError
from core.logging_config import get_logger_with_context, log_error_with_context, log_trial_batch
from analytics import write_report, write_table_csv, write_tail_csv
from monitoring import TrialMetricsCollector, track_latency
from schemas import ErrorRecord, ExperimentConfig
from .commands import COMMANDS, Outcome

logger = logging.getLogger(__name__)


class ExperimentRunner:
    """
    Executa uma configuração e devolve o código de saída

    Uso:
        runner = ExperimentRunner(ExperimentConfig(subcommand='hole-exact', d=2))
        exit_code = runner.run()
    """

    def __init__(self, config: ExperimentConfig, out_dir: Optional[Path] = None):
        self.config = config
        if out_dir is None:
            out_dir = Path(config.out) if config.out else Config.runner().output_dir
        self.out_dir = Path(out_dir)
        self.config_hash = config.config_hash()
        self.metrics = TrialMetricsCollector(config.subcommand)
        self.written: List[Path] = []
        self.log = get_logger_with_context(
            __name__, subcommand=config.subcommand, config_hash=self.config_hash, seed=config.seed
        )

    def _path(self, name: str) -> Path:
        return self.out_dir / f"{self.config.subcommand}_{name}"

    @property
    def error_path(self) -> Path:
        return self._path('error.json')

    def _write_config(self):
        path = self._path('config.json')
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {'config_hash': self.config_hash, **self.config.model_dump(mode='json')}
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write('\n')
        self.written.append(path)

    def _write_outcome(self, outcome: Outcome):
        for name, curve in outcome.curves.items():
            self.written.append(write_tail_csv(curve, self._path(f"{name}.csv"), self.config_hash))
        for name, (columns, rows) in outcome.tables.items():
            self.written.append(write_table_csv(self._path(f"{name}.csv"), columns, rows,
                                                self.config_hash))
        for name, writer in outcome.artifacts.items():
            self.written.append(writer(self._path(name), self.config_hash))

        report = dict(outcome.report)
        if outcome.verdict is not None:
            report['verdict'] = outcome.verdict
        header = {
            'subcommand': self.config.subcommand,
            'generated_at': datetime.now(timezone.utc).isoformat(),
            'metrics': self.metrics.get_summary(),
        }
        self.written.append(write_report(report, self._path('report.json'),
                                         self.config_hash, header))

    def _write_error(self, error: LatticeError) -> Path:
        record = ErrorRecord(config_hash=self.config_hash, **error.to_record())
        path = self.error_path
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(record.model_dump(mode='json'), f, indent=2, sort_keys=True)
            f.write('\n')
        self.written.append(path)
        return path

    def run(self) -> int:
        """Executa o subcomando; 0 em sucesso, exit_code do erro caso contrário"""
        command = COMMANDS[self.config.subcommand]
        self.log.info(f"Running {self.config.subcommand} for {self.config.law} (d={self.config.d})")
        self._write_config()
        start = time.time()
        try:
            law = self.config.build_law()
            outcome = track_latency(self.metrics, self.config.subcommand)(command)(
                self.config, law, self.metrics
            )
        except LatticeError as error:
            log_error_with_context(self.log, error, {
                'subcommand': self.config.subcommand, 'config_hash': self.config_hash,
            })
            self._write_error(error)
            return error.exit_code

        summary = self.metrics.get_summary()
        if summary['trials_total']:
            log_trial_batch(self.log, self.config.subcommand, summary['trials_total'],
                            time.time() - start, summary['trials_flagged'])
        self._write_outcome(outcome)
        if outcome.verdict not in (None, 'pass'):
            self.log.warning(f"{self.config.subcommand} verdict: {outcome.verdict}")
        self.log.info(f"Wrote {len(self.written)} files to {self.out_dir}")
        return 0


def run(config: ExperimentConfig, out_dir: Optional[Path] = None) -> int:
    """Atalho: ExperimentRunner(config, out_dir).run()"""
    return ExperimentRunner(config, out_dir).run()
