import copy
import hashlib
import os.path as osp

import mmcv
from mmcv import Config

from mlzsl.core.evaluation import evaluate
from mlzsl.core.predictors import PREDICTORS
from mlzsl.core.wordspace import load_embeddings
from mlzsl.datasets import (check_disjoint, dump_label_csv, dump_score_csv,
                            load_dataset)
from mlzsl.models import REGRESSORS, build_regressor, save_model
from mlzsl.utils import (ValidationError, check_component, check_keys,
                         component_arguments, config_hash, config_to_dict,
                         derive_seed, get_root_logger, load_config,
                         merge_defaults, set_random_seed, setup_threads)
from mlzsl.version import __version__
from .inference import predict_labels
from .train import train_regressor

METRICS = ('cosine', 'euclidean')
DATA_KEYS = ('embeddings', 'source', 'target')
# keys that do not change results and stay out of the config hash
UNHASHED_KEYS = ('work_dir', 'log_level')

EXPERIMENT_DEFAULTS = dict(
    data=dict(embeddings=None, source=None, target=None),
    regressor=dict(type='JointRegressor'),
    predictor=dict(type='DMP'),
    selftrain=dict(enable=True, k=5),
    metric='cosine',
    threshold=0.5,
    seed=0,
    work_dir=None,
    log_level='INFO')

ARTIFACTS = ('predictions.csv', 'scores.csv', 'report.json', 'model.json')


def experiment_hash(cfg):
    """Config hash over every key that can change the outputs."""
    cfg = config_to_dict(cfg)
    for key in UNHASHED_KEYS:
        cfg.pop(key, None)
    return config_hash(cfg)


def _check_positive_int(value, name):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ValidationError(f'{name} must be a positive integer, '
                              f'got {value!r}')


def check_experiment_config(cfg, data_keys=DATA_KEYS):
    """Validate a resolved experiment config.

    Every component is built once so that bad hyperparameters and missing
    input files surface before any data is read.

    Args:
        cfg (:obj:`mmcv.Config` | dict): Config with defaults filled in.
        data_keys (Sequence[str]): ``data`` entries that must name existing
            files.
    """
    check_component(cfg['regressor'], REGRESSORS, 'regressor')
    check_component(cfg['predictor'], PREDICTORS, 'predictor')
    if cfg['metric'] not in METRICS:
        raise ValidationError(
            f'metric must be one of {METRICS}, got {cfg["metric"]!r}')
    if not 0.0 <= cfg['threshold'] <= 1.0:
        raise ValidationError(
            f'threshold must be in [0, 1], got {cfg["threshold"]}')
    seed = cfg['seed']
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ValidationError(
            f'seed must be a nonnegative integer, got {seed!r}')
    if not isinstance(cfg['selftrain']['enable'], bool):
        raise ValidationError('selftrain.enable must be true or false')
    _check_positive_int(cfg['selftrain']['k'], 'selftrain.k')

    regressor_cfg, predictor_cfg = resolve_components(cfg)
    build_regressor(regressor_cfg)
    predictor_cls = PREDICTORS.get(predictor_cfg['type'])
    predictor_cls(**{k: v for k, v in predictor_cfg.items() if k != 'type'})

    for key in data_keys:
        path = cfg['data'][key]
        if not path:
            raise ValidationError(f'data.{key} is required')
        if not osp.isfile(path):
            raise FileNotFoundError(f'data.{key}: no such file: {path}')


def resolve_components(cfg):
    """Component configs with the experiment-wide settings filled in.

    The regressor gets a sub-seed of ``seed`` unless it sets its own;
    predictors accepting ``metric`` / ``threshold`` get the top-level
    values unless they set their own.

    Returns:
        tuple[dict, dict]: ``(regressor_cfg, predictor_cfg)``.
    """
    regressor_cfg = copy.deepcopy(dict(cfg['regressor']))
    regressor_cfg.setdefault('seed', derive_seed(cfg['seed'], 'regressor'))
    predictor_cfg = copy.deepcopy(dict(cfg['predictor']))
    accepted = component_arguments(PREDICTORS.get(predictor_cfg['type']))
    for key in ('metric', 'threshold'):
        if key in accepted:
            predictor_cfg.setdefault(key, cfg[key])
    return regressor_cfg, predictor_cfg


def load_experiment_config(filename, cfg_options=None, data_keys=DATA_KEYS):
    """Read, fill and validate an experiment config.

    ``data_keys`` lists the input files the caller needs.

    Returns:
        :obj:`mmcv.Config`
    """
    cfg = load_config(filename, EXPERIMENT_DEFAULTS, cfg_options)
    check_experiment_config(cfg, data_keys)
    return cfg


def load_manifest_config(filename, cfg_options=None):
    """The resolved config recorded in a ``manifest.json``."""
    manifest = mmcv.load(filename, file_format='json')
    if not isinstance(manifest, dict) or 'config' not in manifest:
        raise ValidationError(f'{filename} is not a run manifest')
    cfg = Config(manifest['config'], filename=filename)
    if cfg_options:
        cfg.merge_from_dict(cfg_options)
    check_experiment_config(cfg)
    return cfg


def load_inputs(cfg, logger=None):
    """Read the embeddings and both splits named by ``cfg.data``.

    Returns:
        tuple: ``(table, source, target)``.
    """
    logger = logger or get_root_logger()
    data = cfg['data']
    source = load_dataset(data['source'], split='source')
    target = load_dataset(data['target'], split='target')
    check_disjoint(source, target)
    table = load_embeddings(
        data['embeddings'],
        vocabulary=list(source.vocabulary) + list(target.vocabulary))
    logger.info(f'loaded {source!r}, {target!r}, {table!r}')
    return table, source, target


def _sha256(path):
    with open(path, 'rb') as f:
        return hashlib.sha256(f.read()).hexdigest()


def write_artifacts(work_dir, cfg, target, result, report, model=None):
    """Write predictions, scores, report, model and manifest files.

    Every file carries the config hash and seed. Nothing time-dependent is
    recorded, so reruns of one config give byte-identical files.

    Returns:
        dict: Artifact name to path.
    """
    mmcv.mkdir_or_exist(work_dir)
    h = experiment_hash(cfg)
    seed = cfg['seed']
    paths = {name: osp.join(work_dir, name) for name in ARTIFACTS}
    dump_label_csv(
        target.ids,
        result.binary,
        target.vocabulary,
        paths['predictions.csv'],
        config_hash=h,
        seed=seed)
    dump_score_csv(
        target.ids,
        result.scores,
        target.vocabulary,
        paths['scores.csv'],
        config_hash=h,
        seed=seed)
    report.dump(
        paths['report.json'],
        config_hash=h,
        seed=seed,
        method=result.method,
        flagged=[target.ids[i] for i in result.flagged])
    if model is not None:
        save_model(model, paths['model.json'], config_hash=h, seed=seed)
    else:
        paths.pop('model.json')

    manifest = dict(
        config=config_to_dict(cfg),
        config_hash=h,
        seed=seed,
        version=__version__,
        files={
            name: _sha256(path)
            for name, path in sorted(paths.items())
        })
    paths['manifest.json'] = osp.join(work_dir, 'manifest.json')
    mmcv.dump(
        manifest,
        paths['manifest.json'],
        file_format='json',
        indent=2,
        sort_keys=True)
    return paths


def run_experiment(cfg, logger=None):
    """Train, predict and evaluate as configured, then write the artifacts.

    Args:
        cfg (:obj:`mmcv.Config` | dict): Experiment config; missing keys
            take the defaults of ``EXPERIMENT_DEFAULTS``.

    Returns:
        tuple: ``(report, result)`` as :obj:`EvalReport` and
        :obj:`PredictionResult`.
    """
    if not isinstance(cfg, Config):
        raw = copy.deepcopy(dict(cfg))
        check_keys(raw, EXPERIMENT_DEFAULTS)
        cfg = Config(merge_defaults(raw, EXPERIMENT_DEFAULTS))
    logger = logger or get_root_logger(log_level=cfg.get('log_level', 'INFO'))
    check_experiment_config(cfg)
    seed = cfg['seed']
    set_random_seed(seed)
    threads = setup_threads()
    if threads is not None:
        logger.info(f'torch threads capped at {threads}')
    logger.info(f'config hash {experiment_hash(cfg)}, seed {seed}')

    table, source, target = load_inputs(cfg, logger)
    regressor_cfg, predictor_cfg = resolve_components(cfg)
    model = train_regressor(regressor_cfg, source, table, logger=logger)
    selftrain = cfg['selftrain']
    _, _, result = predict_labels(
        model,
        target,
        table,
        predictor_cfg,
        selftrain_k=selftrain['k'] if selftrain['enable'] else None,
        metric=cfg['metric'],
        logger=logger)
    report = evaluate(result, target.labels)
    logger.info(f'{predictor_cfg["type"]} on {len(target)} target '
                f'instances: {report!r}')

    if cfg.get('work_dir'):
        paths = write_artifacts(cfg['work_dir'], cfg, target, result, report,
                                model)
        names = sorted(osp.basename(p) for p in paths.values())
        logger.info(f'artifacts written to {cfg["work_dir"]}: '
                    f'{", ".join(names)}')
    return report, result
