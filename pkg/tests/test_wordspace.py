import time

import numpy as np
import pytest

from mlzsl.core.wordspace import (MAX_POWER_SET_LABELS, EmbeddingTable,
                                  LabelSet, build_power_set, cosine_distance,
                                  load_embeddings, pairwise_distances,
                                  save_embeddings, synthesize_prototype)
from mlzsl.utils import (EmbeddingError, ParseError, PowerSetCapError,
                         ValidationError)


def _write(path, text):
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_load_embeddings_restricts_to_vocabulary(tmp_path):
    path = _write(
        tmp_path / 'vec.txt', '3 4\n'
        'desert 1 0 0 0\n'
        'sea 0 1 0 0\n'
        'trees 0 0 1 0.5\n')
    table = load_embeddings(path, vocabulary=['sea', 'trees'])
    assert len(table) == 2
    assert table.dim == 4
    assert table.labels == ['sea', 'trees']
    np.testing.assert_array_equal(table['trees'], [0, 0, 1, 0.5])
    assert 'desert' not in table


def test_restrict_keeps_vocabulary_order(random_table):
    table = random_table.restrict(['c', 'a'])
    assert table.labels == ['c', 'a']
    np.testing.assert_array_equal(table.matrix(),
                                  random_table.matrix(['c', 'a']))
    assert len(random_table) == 3
    with pytest.raises(EmbeddingError, match="'d'"):
        random_table.restrict(['a', 'd'])


def test_load_embeddings_missing_label(tmp_path):
    path = _write(tmp_path / 'vec.txt', '1 2\nsea 0 1\n')
    with pytest.raises(EmbeddingError, match="label not in embedding file: "
                       "'sunset'"):
        load_embeddings(path, vocabulary=['sea', 'sunset'])


def test_load_embeddings_short_line(tmp_path):
    path = _write(tmp_path / 'vec.txt', '2 4\nsea 0 1 0 0\nsunset 1 2 3\n')
    with pytest.raises(ParseError) as exc:
        load_embeddings(path)
    assert exc.value.lineno == 3
    assert 'sunset' in str(exc.value)


def test_load_embeddings_count_mismatch(tmp_path):
    path = _write(tmp_path / 'vec.txt', '3 2\nsea 0 1\n')
    with pytest.raises(ParseError, match='announces 3'):
        load_embeddings(path)


def test_zero_vector_rejected(tmp_path):
    with pytest.raises(EmbeddingError, match='zero vector'):
        EmbeddingTable(2, dict(sea=[0.0, 0.0]))
    path = _write(tmp_path / 'vec.txt', '1 2\nsea 0 0\n')
    with pytest.raises(EmbeddingError):
        load_embeddings(path)


def test_save_embeddings_is_exact(tmp_path, random_table):
    path = str(tmp_path / 'vec.txt')
    save_embeddings(random_table, path)
    loaded = load_embeddings(path)
    assert loaded.labels == random_table.labels
    np.testing.assert_array_equal(loaded.matrix(), random_table.matrix())


def test_cosine_distance():
    assert cosine_distance([1, 0], [2, 0]) == pytest.approx(0.0, abs=1e-12)
    assert cosine_distance([1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-12)
    assert cosine_distance([1, 0], [1, 1]) == pytest.approx(
        1 - 1 / np.sqrt(2), abs=1e-12)
    assert cosine_distance([1, 0], [-3, 0]) == pytest.approx(2.0, abs=1e-12)


def test_cosine_distance_is_symmetric_and_scale_free():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a, b = rng.standard_normal((2, 7))
        alpha, beta = rng.uniform(0.01, 100.0, size=2)
        d = cosine_distance(a, b)
        assert cosine_distance(b, a) == pytest.approx(d, abs=1e-12)
        assert cosine_distance(alpha * a, beta * b) == pytest.approx(
            d, abs=1e-12)


def test_cosine_distance_errors():
    with pytest.raises(EmbeddingError, match='zero vector'):
        cosine_distance([0, 0], [1, 0])
    with pytest.raises(EmbeddingError, match='dimension mismatch'):
        cosine_distance([1, 0], [1, 0, 0])
    with pytest.raises(EmbeddingError, match='row 1 of the second'):
        pairwise_distances(np.eye(2), [[1, 0], [0, 0]])


def test_pairwise_distances_euclidean():
    dist = pairwise_distances([[0, 0], [3, 4]], [[0, 0]], metric='euclidean')
    np.testing.assert_allclose(dist, [[0], [5]], atol=1e-12)
    with pytest.raises(ValueError):
        pairwise_distances([[1, 0]], [[1, 0]], metric='manhattan')


def test_synthesize_prototype(basis_table):
    np.testing.assert_array_equal(
        synthesize_prototype(basis_table, ['a', 'b']), [1, 1])
    np.testing.assert_array_equal(
        synthesize_prototype(basis_table, ['a']), basis_table['a'])

    table = EmbeddingTable(
        2, dict(a=[1.0, 2.0], b=[3.0, -1.0], c=[0.0, 1.0]))
    np.testing.assert_array_equal(
        synthesize_prototype(table, ['a', 'b', 'c']), [4, 2])


def test_synthesize_prototype_order_invariant(random_table):
    forward = synthesize_prototype(random_table, ['a', 'b', 'c'])
    backward = synthesize_prototype(random_table, ['c', 'b', 'a'])
    np.testing.assert_array_equal(forward, backward)

    vocab = ['a', 'b', 'c']
    subset = LabelSet([2, 0], num_labels=3)
    np.testing.assert_array_equal(
        synthesize_prototype(random_table, subset, vocab),
        synthesize_prototype(random_table, ['c', 'a']))


def test_synthesize_prototype_errors(basis_table):
    with pytest.raises(ValidationError, match='empty label set'):
        synthesize_prototype(basis_table, [])
    with pytest.raises(EmbeddingError, match='sunset'):
        synthesize_prototype(basis_table, ['a', 'sunset'])
    with pytest.raises(ValidationError, match='duplicate'):
        synthesize_prototype(basis_table, ['a', 'a'])


def test_label_set():
    subset = LabelSet.from_bitmask(5, 3)
    assert subset.members == (0, 2)
    assert subset.bitmask == 5
    np.testing.assert_array_equal(subset.to_binary(), [1, 0, 1])
    assert subset.names(['x', 'y', 'z']) == ['x', 'z']
    assert LabelSet.from_binary([1, 0, 1]) == subset
    with pytest.raises(ValidationError):
        LabelSet([1, 1], 3)
    with pytest.raises(ValidationError):
        LabelSet([3], 3)


@pytest.mark.parametrize('m', [1, 3, 5])
def test_power_set_size(m):
    rng = np.random.default_rng(m)
    vocab = [f'l{i}' for i in range(m)]
    table = EmbeddingTable(4, dict(zip(vocab, rng.standard_normal((m, 4)))))
    prototypes = build_power_set(table, vocab)
    assert len(prototypes) == 2**m - 1
    assert prototypes.label_matrix.shape == (2**m - 1, m)
    # ascending bitmask order
    np.testing.assert_array_equal(prototypes.bitmasks,
                                  np.arange(1, 2**m))
    assert not prototypes.refined.any()


def test_power_set_of_orthonormal_basis(basis_table):
    prototypes = build_power_set(basis_table, ['a', 'b'])
    np.testing.assert_array_equal(prototypes.prototypes,
                                  [[1, 0], [0, 1], [1, 1]])
    assert prototypes.subset(2).names(['a', 'b']) == ['a', 'b']
    assert prototypes.row_of(LabelSet([1], 2)) == 1


def test_power_set_tie_order():
    vocab = ['a', 'b', 'c']
    table = EmbeddingTable(3, dict(zip(vocab, np.eye(3))))
    prototypes = build_power_set(table, vocab)
    cardinality = prototypes.cardinality[prototypes.tie_order]
    assert list(cardinality) == sorted(cardinality)
    assert prototypes.bitmasks[prototypes.tie_order][:3].tolist() == [1, 2, 4]


def test_power_set_cancelling_embeddings():
    table = EmbeddingTable(2, dict(a=[1.0, 0.0], b=[-1.0, 0.0]))
    with pytest.raises(EmbeddingError, match=r"\['a', 'b'\]"):
        build_power_set(table, ['a', 'b'])


def test_power_set_cap():
    assert MAX_POWER_SET_LABELS == 20
    rng = np.random.default_rng(0)
    vocab = [f'l{i}' for i in range(21)]
    table = EmbeddingTable(100,
                           dict(zip(vocab, rng.standard_normal((21, 100)))))
    with pytest.raises(PowerSetCapError, match='cap is 20'):
        build_power_set(table, vocab)

    start = time.perf_counter()
    prototypes = build_power_set(table, vocab[:16])
    elapsed = time.perf_counter() - start
    assert len(prototypes) == 2**16 - 1
    assert prototypes.prototypes.shape == (2**16 - 1, 100)
    assert elapsed < 5.0


def test_power_set_rows_are_subset_sums():
    rng = np.random.default_rng(5)
    vocab = ['a', 'b', 'c', 'd', 'e']
    table = EmbeddingTable(6, dict(zip(vocab, rng.standard_normal((5, 6)))))
    prototypes = build_power_set(table, vocab)
    assert len(prototypes) == 31
    for j in range(len(prototypes)):
        subset = prototypes.subset(j)
        assert subset.bitmask == j + 1
        np.testing.assert_allclose(
            prototypes.prototypes[j],
            synthesize_prototype(table, subset, vocab),
            atol=1e-12)


def test_power_set_with_empty_row(basis_table):
    prototypes = build_power_set(basis_table, ['a', 'b'], include_empty=True)
    assert len(prototypes) == 4
    assert prototypes.has_empty
    np.testing.assert_array_equal(prototypes.prototypes[0], [0, 0])
