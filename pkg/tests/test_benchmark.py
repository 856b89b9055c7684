import os.path as osp

import numpy as np
import pytest

from mlzsl.apis import (COLUMNS, DEFAULT_METHODS, benchmark_from_config,
                        dump_table_csv, load_benchmark_config, load_table_csv,
                        parse_method, parse_selftrain, run_benchmark,
                        run_matrix, summarize, summary_table)
from mlzsl.datasets import SynthConfig, generate
from mlzsl.utils import ValidationError

SMALL_JOINT = dict(joint=dict(type='JointRegressor', hidden_units=16,
                              epochs=5))


@pytest.fixture(scope='module')
def small_data():
    return generate(
        SynthConfig(
            dim=8,
            m_S=4,
            m_T=3,
            n_S=80,
            n_T=40,
            feature_dim=12,
            noise_sigma=0.05,
            seed=1))


def test_parse_method():
    assert parse_method('joint+tramp') == ('joint', 'tramp')
    assert parse_method('svr+exdap') == ('svr', 'exdap')
    for bad in ('joint', 'joint+knn', 'mlp+dmp', 'joint+dmp+tramp'):
        with pytest.raises(ValidationError, match='unknown method'):
            parse_method(bad)


def test_parse_selftrain():
    assert parse_selftrain('on') is True
    assert parse_selftrain(False) is False
    with pytest.raises(ValidationError):
        parse_selftrain('yes')


def test_run_matrix_cross_product(small_data):
    rows = run_matrix(
        small_data,
        methods=DEFAULT_METHODS,
        selftrain=('on', 'off'),
        seeds=(0, 1, 2),
        regressors=SMALL_JOINT)
    assert len(rows) == 30
    assert [r['seed'] for r in rows[:10]] == [0] * 10
    assert rows[0]['method'] == DEFAULT_METHODS[0]
    assert [r['selftrain'] for r in rows[:2]] == ['on', 'off']
    for row in rows:
        assert set(row) == set(COLUMNS)
        for col in ('hamming', 'microf1', 'rankloss', 'ap'):
            assert 0.0 <= row[col] <= 1.0


def test_run_matrix_shares_the_regressor(small_data):
    rows = run_matrix(
        small_data,
        methods=('independent+exdap', 'independent+dmp'),
        selftrain=('on', 'off'),
        seeds=(0, ))
    by_key = {(r['method'], r['selftrain']): r for r in rows}
    # exDAP has no prototypes, so self-training cannot change it
    assert by_key['independent+exdap', 'on'] == dict(
        by_key['independent+exdap', 'off'], selftrain='on')


def test_run_matrix_is_deterministic(small_data):
    kwargs = dict(
        methods=('joint+dmp', 'joint+tramp'),
        seeds=(4, ),
        regressors=SMALL_JOINT)
    assert run_matrix(small_data, **kwargs) == run_matrix(
        small_data, **kwargs)


def test_run_matrix_rejects(small_data):
    with pytest.raises(ValidationError, match='duplicates'):
        run_matrix(small_data, methods=('joint+dmp', 'joint+dmp'))
    with pytest.raises(ValidationError, match='duplicates'):
        run_matrix(small_data, methods=('joint+dmp', ), seeds=(1, 1))
    with pytest.raises(ValidationError, match='non-empty'):
        run_matrix(small_data, methods=())


def test_run_benchmark_regenerates_per_seed():
    synth = dict(
        dim=6, m_S=4, m_T=3, n_S=40, n_T=20, feature_dim=6, seed=0)
    rows = run_benchmark(
        synth, methods=('independent+dmp', ), seeds=(0, 1))
    assert [r['seed'] for r in rows] == [0, 1]
    assert rows == run_benchmark(
        synth, methods=('independent+dmp', ), seeds=(0, 1))


def test_table_csv_and_summary(tmp_path):
    rows = [
        dict(method='joint+dmp', selftrain='on', seed=s, hamming=h,
             microf1=0.5, rankloss=0.25, ap=0.75)
        for s, h in ((0, 0.1), (1, 0.3))
    ]
    path = str(tmp_path / 'compare.csv')
    dump_table_csv(rows, path, config_hash='abc', seed='0,1')
    loaded = load_table_csv(path)
    assert loaded == rows

    summary = summarize(loaded)
    assert len(summary) == 1
    assert summary[0]['n_seeds'] == 2
    assert summary[0]['hamming'] == pytest.approx(0.2)
    assert summary[0]['hamming_std'] == pytest.approx(0.1)
    text = summary_table(summary, title='compare')
    assert '1 - MicroF1' in text
    assert '0.2000' in text


def _seed_means(rows, method, selftrain='on'):
    return {
        col: np.mean([
            r[col] for r in rows
            if r['method'] == method and r['selftrain'] == selftrain
        ])
        for col in ('hamming', 'microf1', 'rankloss', 'ap')
    }


CONFIG_ROOT = osp.join(osp.dirname(osp.dirname(__file__)), 'configs')


def _benchmark(name, **overrides):
    cfg = load_benchmark_config(osp.join(CONFIG_ROOT, 'benchmark', name))
    for key, value in overrides.items():
        cfg[key] = value
    return benchmark_from_config(cfg)


@pytest.mark.slow
def test_competitor_ordering():
    rows = _benchmark(
        'competitors_5label.py',
        methods=['independent+exdap', 'joint+dmp', 'joint+tramp'])
    assert len(rows) == 15
    baseline = _seed_means(rows, 'independent+exdap')
    dmp = _seed_means(rows, 'joint+dmp')
    tramp = _seed_means(rows, 'joint+tramp')
    assert dmp['hamming'] < baseline['hamming']
    assert dmp['microf1'] > baseline['microf1']
    assert tramp['rankloss'] < dmp['rankloss']
    assert tramp['ap'] > dmp['ap']


@pytest.mark.slow
def test_self_training_helps_on_shifted_target():
    rows = _benchmark('selftrain_ablation.py')
    assert len(rows) == 20
    for method in ('joint+dmp', 'joint+tramp'):
        on = _seed_means(rows, method, 'on')
        off = _seed_means(rows, method, 'off')
        assert on['rankloss'] <= off['rankloss']
