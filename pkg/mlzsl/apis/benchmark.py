import copy
import dataclasses
import os.path as osp

import mmcv
import numpy as np
from terminaltables import AsciiTable

from mlzsl.core.evaluation import evaluate
from mlzsl.core.predictors import PREDICTORS
from mlzsl.datasets import SynthConfig, generate
from mlzsl.models import REGRESSORS
from mlzsl.utils import (ValidationError, check_component,
                         component_arguments, config_to_dict, derive_seed,
                         get_num_threads, get_root_logger, load_config)
from .inference import predict_labels
from .train import train_regressor

REGRESSOR_PRESETS = dict(
    joint=dict(type='JointRegressor'),
    independent=dict(type='IndependentRegressor'),
    svr=dict(type='LinearSVRRegressor'))
PREDICTOR_PRESETS = dict(
    exdap=dict(type='ExDAP'), dmp=dict(type='DMP'), tramp=dict(type='TraMP'))
DEFAULT_METHODS = ('independent+exdap', 'independent+dmp', 'joint+exdap',
                   'joint+dmp', 'joint+tramp')
COLUMNS = ('method', 'selftrain', 'seed', 'hamming', 'microf1', 'rankloss',
           'ap')
SCORE_COLUMNS = COLUMNS[3:]

BENCHMARK_DEFAULTS = dict(
    synth=SynthConfig().to_dict(),
    methods=list(DEFAULT_METHODS),
    selftrain=['on'],
    seeds=[0],
    regressors=REGRESSOR_PRESETS,
    predictors=PREDICTOR_PRESETS,
    k_selftrain=5,
    metric='cosine',
    threshold=0.5,
    nproc=1,
    work_dir=None,
    log_level='INFO')


def parse_method(method):
    """Split ``'joint+dmp'`` into ``('joint', 'dmp')``."""
    parts = str(method).split('+')
    if len(parts) != 2 or parts[0] not in REGRESSOR_PRESETS or \
            parts[1] not in PREDICTOR_PRESETS:
        raise ValidationError(
            f'unknown method {method!r}; expected <regressor>+<predictor> '
            f'with regressor in {sorted(REGRESSOR_PRESETS)} and predictor '
            f'in {sorted(PREDICTOR_PRESETS)}')
    return parts[0], parts[1]


def parse_selftrain(value):
    """``True``/``'on'`` or ``False``/``'off'`` as a bool."""
    if isinstance(value, bool):
        return value
    if value in ('on', 'off'):
        return value == 'on'
    raise ValidationError(
        f'selftrain settings must be "on" or "off", got {value!r}')


def _predictor_cfg(predictor_cfg, metric, threshold):
    cfg = copy.deepcopy(dict(predictor_cfg))
    args = component_arguments(PREDICTORS.get(cfg['type']))
    if 'metric' in args:
        cfg.setdefault('metric', metric)
    if 'threshold' in args:
        cfg.setdefault('threshold', threshold)
    return cfg


def _run_regressor_cells(task):
    """Train one regressor and score every predictor/selftrain pair on it."""
    (data, regressor_cfg, cells, seed, k_selftrain, metric, threshold,
     predictors) = task
    logger = get_root_logger()
    model = train_regressor(regressor_cfg, data.source, data.embeddings,
                            logger)
    rows = []
    for method, predictor_name, selftrain in cells:
        predictor_cfg = _predictor_cfg(predictors[predictor_name], metric,
                                       threshold)
        _, _, result = predict_labels(
            model,
            data.target,
            data.embeddings,
            predictor_cfg,
            selftrain_k=k_selftrain if selftrain else None,
            metric=metric,
            logger=logger)
        report = evaluate(result, data.target.labels)
        rows.append(
            dict(
                method=method,
                selftrain='on' if selftrain else 'off',
                seed=seed,
                hamming=report.hamming_loss,
                microf1=report.micro_f1,
                rankloss=report.ranking_loss,
                ap=report.average_precision))
    return rows


def run_matrix(data,
               methods=DEFAULT_METHODS,
               selftrain=(True, ),
               seeds=(0, ),
               regressors=None,
               predictors=None,
               k_selftrain=5,
               metric='cosine',
               threshold=0.5,
               nproc=1,
               logger=None):
    """Evaluate every (method, selftrain, seed) cell on one dataset.

    A regressor is trained once per seed and shared by all predictors that
    use it. The seed of a cell reaches the regressor as a sub-seed, so
    cells are independent and may run in worker processes.

    Args:
        data (:obj:`SynthDataset`): Embeddings plus source/target splits.
        methods (Sequence[str]): ``'<regressor>+<predictor>'`` names, e.g.
            ``'joint+dmp'``.
        selftrain (Sequence[bool | str]): Self-training settings to cross.
        seeds (Sequence[int]): Training seeds.
        regressors (dict, optional): Regressor name to component config.
            Defaults to ``REGRESSOR_PRESETS``.
        predictors (dict, optional): Predictor name to component config.
            Defaults to ``PREDICTOR_PRESETS``.
        nproc (int): Worker processes; capped by ``ZSML_THREADS``.

    Returns:
        list[dict]: One row per cell with the keys of ``COLUMNS``, ordered
        by seed, then method, then selftrain setting.
    """
    logger = logger or get_root_logger()
    regressors = dict(REGRESSOR_PRESETS, **(regressors or {}))
    predictors = dict(PREDICTOR_PRESETS, **(predictors or {}))
    settings = [parse_selftrain(s) for s in selftrain]
    parsed = [(m, ) + parse_method(m) for m in methods]
    if not parsed or not settings or not len(seeds):
        raise ValidationError('methods, selftrain and seeds must be '
                              'non-empty')
    for what, values in (('methods', methods), ('selftrain', settings),
                         ('seeds', seeds)):
        if len(set(values)) != len(values):
            raise ValidationError(f'{what} contains duplicates')

    tasks, order = [], []
    for seed in seeds:
        for reg_name in dict.fromkeys(r for _, r, _ in parsed):
            regressor_cfg = copy.deepcopy(dict(regressors[reg_name]))
            regressor_cfg['seed'] = derive_seed(seed, f'regressor.{reg_name}')
            cells = [(m, p, s) for m, r, p in parsed if r == reg_name
                     for s in settings]
            tasks.append((data, regressor_cfg, cells, seed, k_selftrain,
                          metric, threshold, predictors))
    # rows come back grouped by regressor; restore the documented order
    for seed in seeds:
        for m, _, _ in parsed:
            for s in settings:
                order.append((seed, m, 'on' if s else 'off'))

    cap = get_num_threads()
    nproc = min(nproc, cap) if cap else nproc
    logger.info(f'benchmark: {len(order)} cells in {len(tasks)} training '
                f'runs, {nproc} process(es)')
    if nproc > 1:
        grouped = mmcv.track_parallel_progress(
            _run_regressor_cells, tasks, nproc, keep_order=True)
    else:
        grouped = [_run_regressor_cells(task) for task in tasks]
    index = {(r['seed'], r['method'], r['selftrain']): r
             for rows in grouped for r in rows}
    return [index[key] for key in order]


def run_benchmark(synth_cfg,
                  methods=DEFAULT_METHODS,
                  selftrain=(True, ),
                  seeds=(0, ),
                  logger=None,
                  **kwargs):
    """Regenerate the synthetic data per seed and run the matrix on it.

    The dataset of ``seed`` is drawn with the sub-seed
    ``derive_seed(seed, 'synth')``; remaining keyword arguments go to
    :func:`run_matrix`.

    Returns:
        list[dict]: Rows of every seed, in seed order.
    """
    if isinstance(synth_cfg, dict):
        synth_cfg = SynthConfig(**synth_cfg)
    logger = logger or get_root_logger()
    rows = []
    for seed in seeds:
        cfg = dataclasses.replace(synth_cfg, seed=derive_seed(seed, 'synth'))
        data = generate(cfg, logger=logger)
        rows.extend(
            run_matrix(
                data,
                methods,
                selftrain,
                seeds=[seed],
                logger=logger,
                **kwargs))
    return rows


def summarize(rows):
    """Seed mean and standard deviation per (method, selftrain).

    Returns:
        list[dict]: Keys ``method``, ``selftrain``, ``n_seeds`` and
        ``<score>`` / ``<score>_std`` for every score column, in order of
        first appearance.
    """
    groups = {}
    for row in rows:
        groups.setdefault((row['method'], row['selftrain']), []).append(row)
    summary = []
    for (method, selftrain), group in groups.items():
        entry = dict(method=method, selftrain=selftrain, n_seeds=len(group))
        for col in SCORE_COLUMNS:
            values = np.array([r[col] for r in group], dtype=np.float64)
            entry[col] = float(values.mean())
            entry[f'{col}_std'] = float(values.std())
        summary.append(entry)
    return summary


def summary_table(summary, title=None):
    """AsciiTable of :func:`summarize` output with complements of MicroF1
    and AP, so smaller is better in every score column."""
    rows = [[
        'method', 'selftrain', 'seeds', 'Hamming loss', '1 - MicroF1',
        'Ranking loss', '1 - AP'
    ]]
    for s in summary:
        rows.append([
            s['method'], s['selftrain'], s['n_seeds'], f'{s["hamming"]:.4f}',
            f'{1 - s["microf1"]:.4f}', f'{s["rankloss"]:.4f}',
            f'{1 - s["ap"]:.4f}'
        ])
    table = AsciiTable(rows, title)
    return table.table


def dump_table_csv(rows, path, **meta):
    """Write benchmark rows as CSV with the columns of ``COLUMNS``.

    ``meta`` pairs (``config_hash``, ``seed``) go to a leading comment line.
    """
    mmcv.mkdir_or_exist(osp.dirname(osp.abspath(path)))
    lines = ['# ' + ' '.join(f'{k}={v}' for k, v in meta.items()),
             ','.join(COLUMNS)]
    for row in rows:
        lines.append(','.join(
            [row['method'], row['selftrain'], str(row['seed'])] +
            [repr(float(row[c])) for c in SCORE_COLUMNS]))
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write('\n'.join(lines) + '\n')


def load_table_csv(path):
    """Rows written by :func:`dump_table_csv`; ``#`` lines are skipped."""
    lines = [
        line for line in mmcv.list_from_file(path)
        if line.strip() and not line.startswith('#')
    ]
    header = lines[0].split(',') if lines else []
    if tuple(header) != COLUMNS:
        raise ValidationError(f'{path}: expected the columns {COLUMNS}')
    rows = []
    for line in lines[1:]:
        fields = line.split(',')
        row = dict(zip(COLUMNS, fields))
        row['seed'] = int(row['seed'])
        for col in SCORE_COLUMNS:
            row[col] = float(row[col])
        rows.append(row)
    return rows


def check_benchmark_config(cfg):
    """Validate a resolved benchmark config, building nothing heavy."""
    SynthConfig(**cfg['synth'])
    for name, component in cfg['regressors'].items():
        check_component(component, REGRESSORS, f'regressors.{name}')
    for name, component in cfg['predictors'].items():
        check_component(component, PREDICTORS, f'predictors.{name}')
    for method in cfg['methods']:
        parse_method(method)
    for setting in cfg['selftrain']:
        parse_selftrain(setting)
    for seed in cfg['seeds']:
        if isinstance(seed, bool) or int(seed) != seed or seed < 0:
            raise ValidationError(
                f'seeds must be nonnegative integers, got {seed!r}')
    if int(cfg['k_selftrain']) != cfg['k_selftrain'] or \
            cfg['k_selftrain'] < 1:
        raise ValidationError('k_selftrain must be a positive integer')
    if not 0.0 <= cfg['threshold'] <= 1.0:
        raise ValidationError(
            f'threshold must be in [0, 1], got {cfg["threshold"]}')
    if cfg['metric'] not in ('cosine', 'euclidean'):
        raise ValidationError(
            f'metric must be "cosine" or "euclidean", got {cfg["metric"]!r}')
    if int(cfg['nproc']) != cfg['nproc'] or cfg['nproc'] < 1:
        raise ValidationError('nproc must be a positive integer')


def load_benchmark_config(filename, cfg_options=None):
    """Read, fill and validate a benchmark (``compare``) config."""
    cfg = load_config(filename, BENCHMARK_DEFAULTS, cfg_options)
    check_benchmark_config(cfg)
    return cfg


def benchmark_from_config(cfg, logger=None):
    """Run :func:`run_benchmark` with the settings of a benchmark config."""
    cfg = config_to_dict(cfg)
    return run_benchmark(
        cfg['synth'],
        methods=cfg['methods'],
        selftrain=cfg['selftrain'],
        seeds=cfg['seeds'],
        regressors=cfg['regressors'],
        predictors=cfg['predictors'],
        k_selftrain=cfg['k_selftrain'],
        metric=cfg['metric'],
        threshold=cfg['threshold'],
        nproc=cfg['nproc'],
        logger=logger)
