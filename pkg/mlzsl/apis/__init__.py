from .benchmark import (BENCHMARK_DEFAULTS, COLUMNS, DEFAULT_METHODS,
                        benchmark_from_config, dump_table_csv,
                        load_benchmark_config, load_table_csv, parse_method,
                        parse_selftrain, run_benchmark, run_matrix,
                        summarize, summary_table)
from .cli import cli_dispatch
from .experiment import (ARTIFACTS, EXPERIMENT_DEFAULTS,
                         check_experiment_config, experiment_hash,
                         load_experiment_config, load_inputs,
                         load_manifest_config, resolve_components,
                         run_experiment, write_artifacts)
from .inference import predict_labels
from .train import train_regressor

__all__ = [
    'train_regressor', 'predict_labels', 'EXPERIMENT_DEFAULTS', 'ARTIFACTS',
    'check_experiment_config', 'load_experiment_config',
    'load_manifest_config', 'load_inputs', 'resolve_components',
    'write_artifacts', 'experiment_hash', 'run_experiment',
    'BENCHMARK_DEFAULTS', 'DEFAULT_METHODS', 'COLUMNS', 'parse_method',
    'parse_selftrain', 'run_matrix', 'run_benchmark', 'summarize',
    'summary_table', 'dump_table_csv', 'load_table_csv',
    'load_benchmark_config', 'benchmark_from_config', 'cli_dispatch'
]
