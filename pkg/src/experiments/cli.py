# src/experiments/cli.py
"""
Interface de linha de comando dos experimentos

Precedência: flags da CLI > arquivo --config (JSON) > padrões do ExperimentConfig.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError as SchemaError

from core.config import Config
from core.errors import ValidationError
from core.logging_config import setup_experiment_logging
from schemas import ErrorRecord, ExperimentConfig, Subcommand
from .runner import ExperimentRunner

logger = logging.getLogger(__name__)

EPILOG = """
Examples:
  # log h(r) exato para a gaussiana em d = 2
  python run_experiment.py hole-exact --law gaussian:sigma=1 --d 2 --r 2,4,8,16,32

  # verificação da cobertura com perturbação nula
  python run_experiment.py cover-verify --law pointmass:0 --d 1 --L 16 --trials 1

  # cauda do emparelhamento estável em d = 1
  python run_experiment.py oned-tail --law poly-coord:alpha=0.5 --L 10000 --trials 20000 --r geom:1:5000:25

  # grades: lista 'a,b,c', 'geom:início:fim:n' ou 'lin:início:fim:n'

Exit codes:
  0  sucesso
  2  configuração inválida
  3  erro de modelo (MarginInsufficient, WindowTooSmall, ...)
  4  estatística não resolvida (AllMisses, Unresolvable)
"""

# flag -> campo do ExperimentConfig
_FIELD_FLAGS = {
    'law': 'law', 'd': 'd', 'L': 'L', 'margin': 'margin', 'trials': 'trials',
    'r': 'r_grid', 't': 't_grid', 'seed': 'seed', 'tolerance': 'tolerance',
    'k': 'k_list', 'c': 'c', 'n_boot': 'n_boot', 'far_field': 'far_field',
    'audit_trials': 'audit_trials', 'workers': 'workers', 'out': 'out',
}


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help='JSON config file')
    common.add_argument('--law', help='Perturbation law (gaussian:sigma=1, poly-coord:alpha=0.5, ...)')
    common.add_argument('--d', type=int, help='Lattice dimension')
    common.add_argument('--L', type=int, help='Core half-width of the window')
    common.add_argument('--margin', type=int, help='Window margin (default per subcommand)')
    common.add_argument('--trials', type=int, help='Monte Carlo trials')
    common.add_argument('--r', help='Radius grid')
    common.add_argument('--t', help='t grid (variance, discrepancy, moment)')
    common.add_argument('--seed', type=int, help='Master seed')
    common.add_argument('--tolerance', type=float, help='Hole product tolerance')
    common.add_argument('--k', type=lambda s: [int(x) for x in s.split(',')],
                        help='Regularity factors, e.g. 2,3')
    common.add_argument('--c', type=float, help='Constant of the (E(cr)/r)^{cr^d} bound family')
    common.add_argument('--n-boot', dest='n_boot', type=int, help='Bootstrap replicates')
    common.add_argument('--far-field', dest='far_field', choices=['audit', 'window', 'poisson'],
                        help='Outside arrivals in F(r)')
    common.add_argument('--audit-trials', dest='audit_trials', type=int,
                        help='Trials audited for blocking pairs / escape bound')
    common.add_argument('--workers', type=int, help='Worker processes')
    common.add_argument('--out', help='Output directory')
    common.add_argument('--log-dir', dest='log_dir', type=Path, help='Log directory')
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Perturbed-lattice matching experiments',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    subparsers = parser.add_subparsers(dest='subcommand', help='Subcommand')
    common = _common_arguments()
    helps = {
        'hole-exact': 'Exact log h(r) by truncated product',
        'hole-mc': 'Monte Carlo hole probability against the exact value',
        'hole-bounds': 'h(r) sandwiched between powers of p(r)',
        'assumptions': 'Integrability and regularity checks of the tail',
        'cover-verify': 'Regular cover and neighborhood matching checks',
        'match-tail': 'Center-site tail of the cover matching',
        'radius-tail': 'Tail of the cover radius against h(r)',
        'oned-tail': 'Tail of |M(0)| for the 1D stable matching',
        'oned-variance': 'Exact variance of Pi[0, t)',
        'oned-moment': 'Truncated-moment divergence diagnostic',
        'count-variance': 'Exact variance of |Pi in B_r|',
        'oned-discrepancy': 'max |F(r)| scaling and escape-set bound',
        'schemas': 'Dump JSON schemas',
    }
    for command in Subcommand:
        subparsers.add_parser(command.value, parents=[common], help=helps[command.value])
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """
    Monta o ExperimentConfig a partir do arquivo e das flags

    Raises:
        ValidationError: JSON ilegível ou campos inválidos
    """
    data: Dict[str, Any] = {}
    if args.config is not None:
        try:
            with open(args.config, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}")
        data.pop('config_hash', None)
    for flag, name in _FIELD_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[name] = value
    data['subcommand'] = args.subcommand
    try:
        return ExperimentConfig(**data)
    except SchemaError as exc:
        raise ValidationError("invalid experiment config",
                              errors=[f"{'.'.join(map(str, e['loc']))}: {e['msg']}"
                                      for e in exc.errors()])


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.subcommand:
        parser.print_help()
        return 2

    setup_experiment_logging(log_dir=args.log_dir, log_level=Config.runner().log_level)
    try:
        config = config_from_args(args)
    except ValidationError as error:
        record = ErrorRecord(**error.to_record())
        print(json.dumps(record.model_dump(mode='json'), sort_keys=True), file=sys.stderr)
        logger.error(f"Invalid configuration: {error.message}")
        return error.exit_code

    runner = ExperimentRunner(config)
    exit_code = runner.run()
    if exit_code:
        print(runner.error_path.read_text(encoding='utf-8'), file=sys.stderr)
    return exit_code
