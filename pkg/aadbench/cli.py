""" Command-line entry point: `aadbench {synth,evaluate,report,mesd,inspect}`.

Exit codes: 0 success, 1 usage or configuration error, 2 data error, 3 internal error.
"""

import os
import sys
import logging
import argparse

from socket import gethostname
from typing import List, Optional

import pandas as pd

from aadbench.configs.dataset import DatasetConfig
from aadbench.configs.run import RunConfig
from aadbench.configs.synth import SynthConfig
from aadbench.utils.datasets.auto import AutoDataset
from aadbench.utils.datasets.synthetic import generate_dataset
from aadbench.utils.evaluators.crossval import run_evaluation
from aadbench.utils.evaluators.report import MESD_FILE, read_curves, report, write_mesd
from aadbench.utils.exceptions import AADError, ConfigError, DatasetError
from aadbench.utils.metrics.mesd import MesdOptions, mesd
from aadbench.utils.runtime import create_output_dir, dump_configs, log_args, set_seed

console = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3
LOG_FILE = 'aadbench.log'


class ArgumentParser(argparse.ArgumentParser):
    """ Exits with the usage code instead of argparse's default. """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = ArgumentParser(prog='aadbench', description="Auditory attention decoding benchmark")
    commands = parser.add_subparsers(dest='command', required=True)

    synth = commands.add_parser('synth', help="generate a synthetic dataset directory")
    synth.add_argument("--config", type=str, required=True, help="synthetic generator config")
    synth.add_argument("--seed", type=int, default=None)
    synth.add_argument("--out", type=str, default='data/synthetic')

    evaluate = commands.add_parser('evaluate', help="run the cross-validation benchmark")
    evaluate.add_argument("--config", type=str, required=True, help="run config")
    evaluate.add_argument("--seed", type=int, default=None)
    evaluate.add_argument("--workers", type=int, default=None)
    evaluate.add_argument("--out", type=str, default=None)

    summary = commands.add_parser('report', help="aggregate the results of an evaluate run")
    summary.add_argument("--out", type=str, required=True, help="results directory")

    switch = commands.add_parser('mesd', help="compute MESD values for an existing curves file")
    switch.add_argument("--curves", type=str, required=True)
    switch.add_argument("--config", type=str, default=None, help="MESD options")
    switch.add_argument("--out", type=str, default=None)

    inspect = commands.add_parser('inspect', help="print a per-subject dataset summary")
    inspect.add_argument("--dataset", type=str, required=True)

    args = parser.parse_args(argv)
    if getattr(args, 'workers', None) is not None and args.workers < 1:
        parser.error(f"--workers must be positive, got {args.workers}")
    return args


def setup_logging(out_dir: Optional[str] = None) -> None:
    handlers = [logging.StreamHandler(sys.stderr)]
    if out_dir is not None:
        create_output_dir(out_dir)
        handlers.append(logging.FileHandler(os.path.join(out_dir, LOG_FILE), mode='a'))
    logging.basicConfig(
        level=logging.INFO,
        format=f'{gethostname()}: %(asctime)s %(name)s %(levelname)s %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        handlers=handlers,
        force=True,
    )
    logging.captureWarnings(True)


def cmd_synth(args: argparse.Namespace) -> int:
    config = SynthConfig.from_config_file(args.config)
    if args.seed is not None:
        config.seed = args.seed
    setup_logging(args.out)
    log_args(args)
    manifest = generate_dataset(config, args.out)
    config.save(args.out)
    print(manifest)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = RunConfig.from_config_file(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.workers is not None:
        config.workers = args.workers
    if args.out is not None:
        config.out_dir = args.out
    setup_logging(config.out_dir)
    log_args(args)
    set_seed(config.seed)
    dump_configs(config.out_dir, config)

    result = run_evaluation(config, config.out_dir)
    for failure in result.failures:
        print(f"FAILED {failure.algorithm} / {failure.subject_id}: {failure.error}", file=sys.stderr)
    if not result.curves:
        console.error("No algorithm produced a curve")
        return EXIT_DATA
    print(result.paths['curves'])
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    setup_logging(args.out)
    log_args(args)
    paths = report(args.out)
    for path in paths.values():
        print(f"# {path}")
        print(pd.read_csv(path, keep_default_na=False).to_string(index=False))
    return EXIT_OK


def cmd_mesd(args: argparse.Namespace) -> int:
    out_dir = args.out if args.out is not None else os.path.dirname(os.path.abspath(args.curves))
    options = MesdOptions.from_config_file(args.config) if args.config is not None else MesdOptions()
    setup_logging(out_dir)
    log_args(args)
    curves = read_curves(args.curves)
    if not curves:
        raise DatasetError(f"No curves in {args.curves}")
    results = [mesd(curve, options) for curve in curves]
    for curve, result in zip(curves, results):
        print(f"{curve.algorithm}\t{curve.subject_id}\t{result.display()}")
    write_mesd(curves, results, os.path.join(out_dir, MESD_FILE))
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace) -> int:
    setup_logging()
    dataset = AutoDataset.from_config(DatasetConfig(dataset_name='directory', path=args.dataset))
    print(pd.DataFrame.from_records(dataset.summary()).to_string(index=False))
    return EXIT_OK


COMMANDS = {
    'synth': cmd_synth,
    'evaluate': cmd_evaluate,
    'report': cmd_report,
    'mesd': cmd_mesd,
    'inspect': cmd_inspect,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, FileNotFoundError) as e:
        print(f"aadbench {args.command}: configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AADError as e:
        print(f"aadbench {args.command}: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception as e:
        console.exception(f"Internal error in {args.command}")
        print(f"aadbench {args.command}: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
