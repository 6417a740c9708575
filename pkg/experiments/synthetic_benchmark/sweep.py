import os
import argparse
import logging

import numpy as np

from socket import gethostname

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.configs.evaluation import EvaluationConfig
from aadbench.configs.synth import SynthConfig
from aadbench.utils.data import write_dict_to_file
from aadbench.utils.datasets.base import BaseDataset
from aadbench.utils.datasets.synthetic import generate_trials
from aadbench.utils.evaluators.crossval import evaluate_subject
from aadbench.utils.metrics.accuracy import standard_error
from aadbench.utils.runtime import create_output_dir, dump_configs, log_args

console = logging.getLogger(__file__)
logging.basicConfig(
    level=logging.INFO,
    filename=f"{os.environ.get('SLURM_JOB_NAME', 'sweep')}.log",
    filemode='a',
    format=f'{gethostname()}: %(asctime)s %(name)s %(levelname)s %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S',
)
logging.captureWarnings(True)


def parse_args():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out_dir", type=str, default='results/sweep')
    parser.add_argument("--path_to_synth_config", type=str, required=True)
    parser.add_argument("--path_to_evaluation_config", type=str, required=True)
    parser.add_argument("--path_to_algorithm_config", type=str, nargs='+', required=True)
    parser.add_argument("--noise_level", type=float, nargs='+', default=[4.0, 2.0, 1.0, 0.5])
    parser.add_argument("--seed", type=int, nargs='+', default=list(range(10)))
    parser.add_argument("--tau", type=float, default=30.0)
    parser.add_argument("--n_subjects", type=int, default=2)
    args = parser.parse_args()
    log_args(args)
    return args


def main(args):
    synth_config = SynthConfig.from_config_file(args.path_to_synth_config)
    evaluation_config = EvaluationConfig.from_config_file(args.path_to_evaluation_config)
    evaluation_config.taus = [args.tau]
    algorithm_configs = [AlgorithmConfig.from_config_file(path) for path in args.path_to_algorithm_config]
    create_output_dir(args.out_dir)
    dump_configs(args.out_dir, synth_config, evaluation_config)

    # results[algorithm][noise_level][seed] = mean accuracy over subjects
    results = {config.name: {str(level): {} for level in args.noise_level} for config in algorithm_configs}
    for level in args.noise_level:
        for seed in args.seed:
            synth_config.noise_level = level
            synth_config.seed = seed
            synth_config.n_subjects = args.n_subjects
            dataset = BaseDataset(generate_trials(synth_config))
            for config in algorithm_configs:
                accuracies = []
                for trials in dataset.by_subject().values():
                    result = evaluate_subject(config, trials, evaluation_config)
                    if result.curve is not None:
                        accuracies.append(result.curve.points[0].accuracy)
                results[config.name][str(level)][str(seed)] = float(np.mean(accuracies)) if accuracies else None
                console.info(f"{config.name}, noise {level}, seed {seed}: {results[config.name][str(level)][str(seed)]}")
    return results


def aggregate_results(results, noise_levels, seeds):
    out = {}
    for algorithm, by_level in results.items():
        out[algorithm] = {}
        for level, by_seed in by_level.items():
            values = np.array([v for v in by_seed.values() if v is not None])
            out[algorithm][level] = {
                'mean': round(float(np.mean(values)), 3) if len(values) else None,
                'se': round(standard_error(values), 3) if len(values) > 1 else None,
            }
        # accuracy should not drop as the noise level decreases
        inversions = 0
        for seed in seeds:
            series = [by_level[str(level)][str(seed)] for level in sorted(noise_levels, reverse=True)]
            series = [v for v in series if v is not None]
            inversions += int(any(b < a for a, b in zip(series, series[1:])))
        out[algorithm]['seeds_with_inversion'] = inversions
    return out


if __name__ == "__main__":
    args = parse_args()
    results = main(args)
    write_dict_to_file(results, os.path.join(args.out_dir, 'results.json'))
    aggregated = aggregate_results(results, args.noise_level, args.seed)
    write_dict_to_file(aggregated, os.path.join(args.out_dir, 'aggregated_results.json'))
    print(aggregated)
