import argparse
import logging
import os.path as osp
import sys

import numpy as np
from mmcv import Config, DictAction
from terminaltables import AsciiTable

from mlzsl.core.evaluation import evaluate
from mlzsl.core.wordspace import load_embeddings
from mlzsl.datasets import (SynthConfig, align_rows, dump_label_csv,
                            dump_score_csv, dump_vector_csv, generate,
                            load_dataset, load_label_csv)
from mlzsl.models import load_model, save_model
from mlzsl.utils import (ValidationError, ZSLError, check_keys,
                         config_to_dict, get_root_logger, merge_defaults,
                         set_random_seed, setup_threads)
from .benchmark import (BENCHMARK_DEFAULTS, benchmark_from_config,
                        dump_table_csv, load_benchmark_config, summarize,
                        summary_table)
from .experiment import (experiment_hash, load_experiment_config,
                         load_manifest_config, resolve_components,
                         run_experiment)
from .inference import predict_labels
from .train import train_regressor

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Bad command line."""


class ArgumentParser(argparse.ArgumentParser):
    """Raises :obj:`UsageError` instead of exiting with status 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f'{self.prog}: error: {message}')


def _cfg_options(parser):
    parser.add_argument(
        '--cfg-options',
        nargs='+',
        action=DictAction,
        help='override some settings in the used config, the key-value pair '
        'in xxx=yyy format will be merged into config file. If the value to '
        'be overwritten is a list, it should be like key="[a,b]" or key=a,b')


def _log_options(parser):
    parser.add_argument('--log-file', help='also write the log to this file')
    parser.add_argument(
        '--log-level',
        default='INFO',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        help='log verbosity (logs go to stderr)')


def build_parser():
    parser = ArgumentParser(
        prog='zsml',
        description='Zero-shot multi-label prediction in a word space')
    subparsers = parser.add_subparsers(
        dest='command', metavar='command', parser_class=ArgumentParser)
    subparsers.required = True

    p = subparsers.add_parser(
        'synth-gen', help='write a synthetic benchmark dataset')
    p.add_argument('--out', required=True, help='output directory')
    p.add_argument(
        '--config', help='config whose "synth" dict holds the generator')
    p.add_argument('--seed', type=int, help='override synth.seed')
    _cfg_options(p)
    _log_options(p)

    p = subparsers.add_parser('train', help='train a regressor')
    p.add_argument('--config', required=True, help='experiment config')
    p.add_argument(
        '--out', help='model file (.json or .pth), default '
        '<work_dir>/model.json')
    _cfg_options(p)
    _log_options(p)

    p = subparsers.add_parser(
        'predict', help='predict target labels with a trained model')
    p.add_argument('--config', required=True, help='experiment config')
    p.add_argument('--model', required=True, help='trained model file')
    p.add_argument(
        '--out-dir', help='output directory, default the config work_dir')
    p.add_argument(
        '--show',
        type=int,
        default=0,
        metavar='N',
        help='print ground truth and predicted labels of N instances')
    _cfg_options(p)
    _log_options(p)

    p = subparsers.add_parser(
        'evaluate', help='score predictions against ground truth')
    p.add_argument('--pred', required=True, help='predictions CSV')
    p.add_argument('--truth', required=True, help='ground-truth CSV')
    p.add_argument(
        '--scores',
        help='scores CSV for the ranking criteria; the 0/1 predictions are '
        'ranked when omitted')
    p.add_argument('--out', help='write the report as JSON')
    _log_options(p)

    p = subparsers.add_parser(
        'run', help='train, predict and evaluate in one go')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--config', help='experiment config')
    group.add_argument(
        '--manifest', help='rerun the config recorded in a manifest.json')
    p.add_argument('--work-dir', help='override work_dir')
    _cfg_options(p)
    _log_options(p)

    p = subparsers.add_parser(
        'compare', help='benchmark the competitor matrix on synthetic data')
    p.add_argument('--config', required=True, help='benchmark config')
    p.add_argument(
        '--out', help='result CSV, default <work_dir>/compare.csv')
    p.add_argument('--nproc', type=int, help='override nproc')
    _cfg_options(p)
    _log_options(p)
    return parser


def _logger(args):
    return get_root_logger(
        log_file=args.log_file, log_level=getattr(logging, args.log_level))


def cmd_synth_gen(args, logger):
    if args.config:
        cfg = Config.fromfile(args.config)
        if args.cfg_options:
            cfg.merge_from_dict(args.cfg_options)
        raw = config_to_dict(cfg)
        check_keys(raw, BENCHMARK_DEFAULTS)
        synth = merge_defaults(raw.get('synth', {}),
                               BENCHMARK_DEFAULTS['synth'])
    else:
        cfg = Config(dict(synth=dict()))
        if args.cfg_options:
            cfg.merge_from_dict(args.cfg_options)
        raw = config_to_dict(cfg)
        check_keys(raw, dict(synth=BENCHMARK_DEFAULTS['synth']))
        synth = merge_defaults(raw['synth'], BENCHMARK_DEFAULTS['synth'])
    if args.seed is not None:
        synth['seed'] = args.seed
    data = generate(SynthConfig(**synth), logger=logger)
    paths = data.export(args.out)
    logger.info(f'wrote {data!r} to {args.out} '
                f'(config hash {data.config_hash})')
    for name, path in paths.items():
        print(f'{name}: {path}')
    return EXIT_OK


def _work_dir(cfg, override=None):
    work_dir = override or cfg.get('work_dir')
    if not work_dir:
        raise ValidationError('no work_dir in the config and no output path '
                              'given')
    return work_dir


def cmd_train(args, logger):
    cfg = load_experiment_config(
        args.config, args.cfg_options, data_keys=('embeddings', 'source'))
    set_random_seed(cfg.seed)
    setup_threads()
    source = load_dataset(cfg.data.source, split='source')
    table = load_embeddings(cfg.data.embeddings, vocabulary=source.vocabulary)
    regressor_cfg, _ = resolve_components(cfg)
    model = train_regressor(regressor_cfg, source, table, logger)
    out = args.out or osp.join(_work_dir(cfg), 'model.json')
    save_model(model, out, config_hash=experiment_hash(cfg), seed=cfg.seed)
    logger.info(f'saved {model!r} to {out}')
    return EXIT_OK


def _show_table(target, result, count):
    truth = [[target.vocabulary[j] for j in np.flatnonzero(row)]
             for row in target.labels]
    predicted = result.label_names(target.vocabulary)
    rows = [['id', 'ground truth', 'predicted']]
    for i in range(min(count, len(target))):
        rows.append([
            target.ids[i], ' '.join(truth[i]) or '-',
            ' '.join(predicted[i]) or '-'
        ])
    return AsciiTable(rows, f'{result.method} predictions').table


def cmd_predict(args, logger):
    cfg = load_experiment_config(
        args.config, args.cfg_options, data_keys=('embeddings', 'target'))
    if not osp.isfile(args.model):
        raise FileNotFoundError(f'no such model file: {args.model}')
    setup_threads()
    target = load_dataset(cfg.data.target, split='target')
    table = load_embeddings(cfg.data.embeddings, vocabulary=target.vocabulary)
    model = load_model(args.model)
    _, predictor_cfg = resolve_components(cfg)
    selftrain = cfg.selftrain
    Y_hat, _, result = predict_labels(
        model,
        target,
        table,
        predictor_cfg,
        selftrain_k=selftrain.k if selftrain.enable else None,
        metric=cfg.metric,
        logger=logger)

    out_dir = _work_dir(cfg, args.out_dir)
    meta = dict(config_hash=experiment_hash(cfg), seed=cfg.seed)
    dump_vector_csv(target.ids, Y_hat, osp.join(out_dir, 'embeddings.csv'),
                    **meta)
    dump_label_csv(target.ids, result.binary, target.vocabulary,
                   osp.join(out_dir, 'predictions.csv'), **meta)
    dump_score_csv(target.ids, result.scores, target.vocabulary,
                   osp.join(out_dir, 'scores.csv'), **meta)
    logger.info(f'{result!r} written to {out_dir}')
    if args.show > 0:
        print(_show_table(target, result, args.show))
    return EXIT_OK


def cmd_evaluate(args, logger):
    truth_ids, truth, vocabulary, _ = load_label_csv(args.truth)
    pred_ids, binary, pred_vocab, meta = load_label_csv(args.pred)
    if pred_vocab != vocabulary:
        raise ValidationError(
            f'{args.pred} labels {list(pred_vocab)} differ from '
            f'{args.truth} labels {list(vocabulary)}')
    binary = align_rows(pred_ids, binary, truth_ids)
    if args.scores:
        score_ids, scores, score_vocab, _ = load_label_csv(args.scores)
        if score_vocab != vocabulary:
            raise ValidationError(
                f'{args.scores} labels differ from {args.truth} labels')
        scores = align_rows(score_ids, scores, truth_ids, 'scores')
    else:
        logger.warning('no --scores given: ranking criteria use the 0/1 '
                       'predictions, ties count half')
        scores = binary.astype(np.float64)
    report = evaluate(scores, truth, binary=binary)
    print(report.table(title=osp.basename(args.pred)))
    if args.out:
        report.dump(args.out, **meta)
    return EXIT_OK


def cmd_run(args, logger):
    if args.manifest:
        cfg = load_manifest_config(args.manifest, args.cfg_options)
    else:
        cfg = load_experiment_config(args.config, args.cfg_options)
    if args.work_dir:
        cfg.work_dir = args.work_dir
    elif not cfg.get('work_dir'):
        name = osp.splitext(osp.basename(args.config or args.manifest))[0]
        cfg.work_dir = osp.join('./work_dirs', name)
    report, _ = run_experiment(cfg, logger=logger)
    print(report.table(title=cfg.predictor.type))
    return EXIT_OK


def cmd_compare(args, logger):
    cfg = load_benchmark_config(args.config, args.cfg_options)
    if args.nproc is not None:
        if args.nproc < 1:
            raise ValidationError('--nproc must be positive')
        cfg.nproc = args.nproc
    out = args.out
    if out is None:
        work_dir = cfg.get('work_dir') or osp.join(
            './work_dirs',
            osp.splitext(osp.basename(args.config))[0])
        out = osp.join(work_dir, 'compare.csv')
    setup_threads()
    rows = benchmark_from_config(cfg, logger=logger)
    hashed = config_to_dict(cfg)
    for key in ('work_dir', 'log_level', 'nproc'):
        hashed.pop(key, None)
    dump_table_csv(
        rows,
        out,
        config_hash=experiment_hash(hashed),
        seed=','.join(str(s) for s in cfg.seeds))
    print(summary_table(summarize(rows), title=osp.basename(out)))
    logger.info(f'{len(rows)} rows written to {out}')
    return EXIT_OK


COMMANDS = {
    'synth-gen': cmd_synth_gen,
    'train': cmd_train,
    'predict': cmd_predict,
    'evaluate': cmd_evaluate,
    'run': cmd_run,
    'compare': cmd_compare,
}


def cli_dispatch(argv=None):
    """Run one ``zsml`` subcommand.

    Returns:
        int: 0 on success, 1 on a usage error, 2 on a data or validation
        error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    logger = _logger(args)
    try:
        return COMMANDS[args.command](args, logger)
    except (ZSLError, FileNotFoundError) as e:
        logger.error(f'zsml {args.command}: error: {e}')
        return EXIT_DATA


def main():
    sys.exit(cli_dispatch())


if __name__ == '__main__':
    main()
