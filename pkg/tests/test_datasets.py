import numpy as np
import pytest

from mlzsl.core.wordspace import load_embeddings
from mlzsl.datasets import (MultiLabelDataset, SynthConfig, align_rows,
                            check_coupling, check_disjoint, dump_label_csv,
                            draw_label_vectors, dump_score_csv, generate,
                            load_dataset, load_label_csv, random_coupling,
                            sample_label_sets, save_dataset)
from mlzsl.utils import EmbeddingError, ParseError, ValidationError

GOOD_CSV = """# split=target seed=3
id,f1,f2,l_sea,l_sunset
t0,0.5,1.0,1,0
t1,-0.25,2.0,1,1
t2,0.0,0.0,0,1
"""


def _write(path, text):
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_load_dataset(tmp_path):
    ds = load_dataset(_write(tmp_path / 'target.csv', GOOD_CSV))
    assert len(ds) == 3
    assert ds.split == 'target'
    assert ds.vocabulary == ('sea', 'sunset')
    assert ds.ids == ('t0', 't1', 't2')
    assert ds.meta['seed'] == '3'
    np.testing.assert_array_equal(ds.features[1], [-0.25, 2.0])
    np.testing.assert_array_equal(ds.labels, [[1, 0], [1, 1], [0, 1]])
    assert ds.multilabel_rate() == pytest.approx(1 / 3)
    assert load_dataset(str(tmp_path / 'target.csv'),
                        split='source').split == 'source'


def test_load_dataset_short_row(tmp_path):
    text = GOOD_CSV.replace('t2,0.0,0.0,0,1', 't2,0.0,0.0,0')
    with pytest.raises(ParseError) as exc:
        load_dataset(_write(tmp_path / 'bad.csv', text))
    assert exc.value.lineno == 5


def test_load_dataset_duplicate_id(tmp_path):
    text = GOOD_CSV.replace('t2,', 't0,')
    with pytest.raises(ParseError, match="duplicate instance id 't0'"):
        load_dataset(_write(tmp_path / 'bad.csv', text))


def test_load_dataset_bad_label(tmp_path):
    text = GOOD_CSV.replace('t1,-0.25,2.0,1,1', 't1,-0.25,2.0,1,2')
    with pytest.raises(ParseError, match='0 or 1') as exc:
        load_dataset(_write(tmp_path / 'bad.csv', text))
    assert exc.value.lineno == 4


def test_load_dataset_bad_header(tmp_path):
    text = GOOD_CSV.replace('id,f1,f2,l_sea', 'id,f1,f3,l_sea')
    with pytest.raises(ParseError, match='header') as exc:
        load_dataset(_write(tmp_path / 'bad.csv', text))
    assert exc.value.lineno == 2
    with pytest.raises(FileNotFoundError):
        load_dataset(str(tmp_path / 'missing.csv'))


def test_dataset_validation():
    with pytest.raises(ValidationError, match='vocabulary of 3'):
        MultiLabelDataset(np.zeros((2, 2)), np.zeros((2, 2)), ['a', 'b', 'c'])
    with pytest.raises(ValidationError, match="duplicate instance id 'x'"):
        MultiLabelDataset(
            np.zeros((2, 2)), np.zeros((2, 1)), ['a'], ids=['x', 'x'])
    with pytest.raises(ValidationError, match='non-finite'):
        MultiLabelDataset([[np.nan]], [[1]], ['a'])


def test_check_vocabulary_and_disjoint(basis_table):
    source = MultiLabelDataset(np.zeros((1, 2)), [[1, 0]], ['a', 'b'])
    source.check_vocabulary(basis_table)
    target = MultiLabelDataset(
        np.zeros((1, 2)), [[1, 0]], ['b', 'c'], split='target')
    with pytest.raises(EmbeddingError, match="'c'"):
        target.check_vocabulary(basis_table)
    with pytest.raises(ValidationError, match='share labels: b'):
        check_disjoint(source, target)


def test_save_dataset_reads_back_exactly(tmp_path):
    rng = np.random.default_rng(0)
    ds = MultiLabelDataset(
        rng.standard_normal((4, 3)), [[1, 0], [0, 1], [1, 1], [0, 1]],
        ['sea', 'trees'],
        split='target',
        ids=['a', 'b', 'c', 'd'])
    path = str(tmp_path / 'ds.csv')
    save_dataset(ds, path, config_hash='f00', seed=1)
    loaded = load_dataset(path)
    assert loaded.split == 'target'
    assert loaded.meta['config_hash'] == 'f00'
    np.testing.assert_array_equal(loaded.features, ds.features)
    np.testing.assert_array_equal(loaded.labels, ds.labels)
    with open(path, 'rb') as f:
        assert b'\r\n' not in f.read()


def test_label_and_score_csv(tmp_path):
    ids = ['t0', 't1']
    pred = str(tmp_path / 'pred.csv')
    dump_label_csv(ids, [[1, 0], [1, 1]], ['sea', 'sunset'], pred, seed=0)
    read_ids, binary, vocab, meta = load_label_csv(pred)
    assert read_ids == ids
    assert vocab == ('sea', 'sunset')
    assert meta == dict(seed='0')
    np.testing.assert_array_equal(binary, [[1, 0], [1, 1]])

    scores = str(tmp_path / 'scores.csv')
    dump_score_csv(ids, [[0.25, 0.1], [0.5, 0.75]], ['sea', 'sunset'], scores)
    _, matrix, _, _ = load_label_csv(scores)
    assert matrix.dtype == np.float64
    np.testing.assert_array_equal(matrix, [[0.25, 0.1], [0.5, 0.75]])

    # a dataset file is read as ground truth, features ignored
    truth = _write(tmp_path / 'target.csv', GOOD_CSV)
    _, labels, vocab, _ = load_label_csv(truth)
    assert vocab == ('sea', 'sunset')
    assert labels.shape == (3, 2)


def test_align_rows():
    matrix = np.array([[1, 0], [0, 1]])
    np.testing.assert_array_equal(
        align_rows(['b', 'a'], matrix, ['a', 'b']), [[0, 1], [1, 0]])
    with pytest.raises(ValidationError, match="missing id 'c'"):
        align_rows(['a', 'b'], matrix, ['a', 'c'])


def test_synth_is_deterministic():
    cfg = SynthConfig(m_T=5, n_T=200, n_S=100, seed=4)
    first, second = generate(cfg), generate(cfg)
    for a, b in ((first.source, second.source), (first.target,
                                                 second.target)):
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)
        assert a.ids == b.ids
    np.testing.assert_array_equal(first.embeddings.matrix(),
                                  second.embeddings.matrix())
    assert first.config_hash == second.config_hash

    other = generate(SynthConfig(m_T=5, n_T=200, n_S=100, seed=5))
    assert not np.array_equal(first.target.features, other.target.features)


def test_synth_rate_zero_is_single_label():
    data = generate(SynthConfig(multilabel_rate=0.0, n_S=50, n_T=80))
    assert np.all(data.source.labels.sum(axis=1) == 1)
    assert np.all(data.target.labels.sum(axis=1) == 1)


def test_synth_single_label_source():
    data = generate(
        SynthConfig(
            multilabel_rate=0.3, source_multilabel_rate=0.0, n_S=60, n_T=100))
    assert data.source.multilabel_rate() == 0.0
    assert data.target.multilabel_rate() == pytest.approx(0.3, abs=0.03)


def test_synth_multilabel_rate_and_sizes():
    data = generate(
        SynthConfig(m_T=5, n_T=200, multilabel_rate=0.3, max_labels=3))
    assert data.target.multilabel_rate() == pytest.approx(0.3, abs=0.03)
    sizes = data.target.labels.sum(axis=1)
    assert sizes.min() >= 1
    assert sizes.max() <= 3


def test_synth_identity_noiseless_features():
    data = generate(
        SynthConfig(
            dim=8, feature_dim=8, g='identity', noise_sigma=0.0, shift=0.0))
    for split in (data.source, data.target):
        V = data.embeddings.matrix(split.vocabulary)
        np.testing.assert_allclose(
            split.features, split.labels.astype(np.float64) @ V, atol=1e-12)


def test_synth_vocabularies():
    data = generate(SynthConfig(m_S=3, m_T=12, n_S=10, n_T=10))
    assert data.source.vocabulary == ('src0', 'src1', 'src2')
    assert data.target.vocabulary[:2] == ('tgt00', 'tgt01')
    check_disjoint(data.source, data.target)
    assert data.target.ids[0] == 't0'


def test_synth_source_labels_span_target_vectors():
    data = generate(SynthConfig(dim=32, m_S=12, m_T=5, n_S=20, n_T=10))
    V_S = data.embeddings.matrix(data.source.vocabulary)
    V_T = data.embeddings.matrix(data.target.vocabulary)
    assert np.linalg.matrix_rank(V_S) == 12
    coef, *_ = np.linalg.lstsq(V_S.T, V_T.T, rcond=None)
    np.testing.assert_allclose(V_S.T @ coef, V_T.T, atol=1e-8)

    low = generate(SynthConfig(dim=32, rank=8, m_S=12, n_S=20, n_T=10))
    assert np.linalg.matrix_rank(low.embeddings.matrix(), tol=1e-8) == 8


def test_draw_label_vectors_full_rank_is_plain_gaussian():
    full = draw_label_vectors(5, 4, 4, np.random.default_rng(3))
    np.testing.assert_array_equal(
        full, np.random.default_rng(3).standard_normal((5, 4)))
    low = draw_label_vectors(2000, 16, 4, np.random.default_rng(3))
    # unit variance along each of the 4 basis directions
    assert np.mean(np.sum(low**2, axis=1)) == pytest.approx(4.0, rel=0.05)


@pytest.mark.parametrize('kwargs', [
    dict(m_T=1),
    dict(rank=0),
    dict(dim=8, rank=9),
    dict(multilabel_rate=1.5),
    dict(correlation=-0.1),
    dict(g='cubic'),
    dict(g='identity', dim=8, feature_dim=16),
    dict(max_labels=1),
])
def test_synth_config_rejects(kwargs):
    with pytest.raises(ValidationError):
        SynthConfig(**kwargs)


def test_coupling_validation():
    rng = np.random.default_rng(0)
    J = random_coupling(4, rng)
    np.testing.assert_array_equal(J, J.T)
    assert np.all(np.diag(J) == 0)
    assert set(np.unique(J)) <= {-1.0, 0.0, 1.0}
    check_coupling(J, 4)

    asymmetric = J.copy()
    asymmetric[0, 1] = -asymmetric[0, 1]
    with pytest.raises(ValidationError, match='symmetric'):
        check_coupling(asymmetric, 4)
    with pytest.raises(ValidationError, match=r'\[-1, 1\]'):
        check_coupling(2 * J, 4)
    with pytest.raises(ValidationError, match='4 x 4'):
        check_coupling(np.zeros((3, 3)), 4)
    with pytest.raises(ValidationError, match='coupling'):
        generate(SynthConfig(m_T=4, coupling=np.ones((4, 4))))


def test_positive_coupling_favours_pairs():
    m = 4
    coupling = -np.ones((m, m))
    coupling[0, 1] = coupling[1, 0] = 1.0
    np.fill_diagonal(coupling, 0.0)
    labels = sample_label_sets(
        400,
        m,
        multilabel_rate=1.0,
        max_labels=2,
        correlation=1.0,
        coupling=coupling,
        rng=np.random.default_rng(0))
    pair = np.mean(labels[:, 0] & labels[:, 1])
    # uniform pairs would give 1/6
    assert pair > 0.5


def test_synth_export(tmp_path):
    data = generate(SynthConfig(n_S=20, n_T=10, dim=4, feature_dim=6))
    paths = data.export(str(tmp_path))
    source = load_dataset(paths['source'])
    target = load_dataset(paths['target'])
    assert source.split == 'source'
    assert target.split == 'target'
    assert target.meta['config_hash'] == data.config_hash
    np.testing.assert_array_equal(target.features, data.target.features)
    table = load_embeddings(paths['embeddings'], vocabulary=target.vocabulary)
    np.testing.assert_array_equal(
        table.matrix(), data.embeddings.matrix(target.vocabulary))
