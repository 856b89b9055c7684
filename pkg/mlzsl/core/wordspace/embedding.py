import os.path as osp

import mmcv
import numpy as np
from sklearn.metrics.pairwise import cosine_distances, euclidean_distances

from mlzsl.utils.exceptions import EmbeddingError, ParseError


class EmbeddingTable(object):
    """Word vectors of a label vocabulary, i.e. the map v: W -> V.

    Args:
        dim (int): Dimensionality of every word vector.
        entries (dict[str, array_like]): Label string to vector of ``dim``
            real numbers. Insertion order is kept.
    """

    def __init__(self, dim, entries):
        if int(dim) != dim or dim < 1:
            raise EmbeddingError(f'dim must be a positive integer, got {dim}')
        self.dim = int(dim)
        self._entries = {}
        for label, vector in entries.items():
            if label in self._entries:
                raise EmbeddingError(f'duplicate label {label!r}')
            vector = np.array(vector, dtype=np.float64)
            if vector.shape != (self.dim, ):
                raise EmbeddingError(
                    f'vector of {label!r} has shape {vector.shape}, '
                    f'expected ({self.dim},)')
            if not np.all(np.isfinite(vector)):
                raise EmbeddingError(f'vector of {label!r} is not finite')
            if not np.any(vector):
                raise EmbeddingError(
                    f'vector of {label!r} is the zero vector, cosine '
                    'distance is undefined for it')
            vector.setflags(write=False)
            self._entries[label] = vector

    def __len__(self):
        return len(self._entries)

    def __contains__(self, label):
        return label in self._entries

    def __getitem__(self, label):
        try:
            return self._entries[label]
        except KeyError:
            raise EmbeddingError(f'label not in embedding table: {label!r}')

    def __repr__(self):
        return (f'{self.__class__.__name__}(dim={self.dim}, '
                f'num_labels={len(self)})')

    @property
    def labels(self):
        return list(self._entries)

    def matrix(self, vocabulary=None):
        """Stack vectors of ``vocabulary`` (default: all labels) row-wise."""
        if vocabulary is None:
            vocabulary = self.labels
        if len(vocabulary) == 0:
            return np.zeros((0, self.dim))
        return np.stack([self[label] for label in vocabulary])

    def restrict(self, vocabulary):
        """A new table holding only ``vocabulary``, in that order."""
        missing = [label for label in vocabulary if label not in self]
        if missing:
            raise EmbeddingError(
                f'label not in embedding file: {missing[0]!r}')
        return EmbeddingTable(self.dim,
                              {label: self[label]
                               for label in vocabulary})


def load_embeddings(path, vocabulary=None):
    """Load word vectors from the text layout ``<count> <dim>`` followed by
    ``<label> <f1> ... <fdim>`` lines.

    Args:
        path (str): UTF-8 embedding file.
        vocabulary (list[str], optional): Labels to keep. Every one of them
            must be present in the file. Defaults to all labels.

    Returns:
        :obj:`EmbeddingTable`: Table restricted to ``vocabulary``.
    """
    lines = mmcv.list_from_file(path, encoding='utf-8')
    if not lines:
        raise ParseError('empty embedding file', path, 1)
    header = lines[0].split()
    try:
        count, dim = (int(x) for x in header)
    except ValueError:
        raise ParseError(
            f'header must be "<count> <dim>", got {lines[0]!r}', path, 1)
    if count < 0 or dim < 1:
        raise ParseError(f'invalid header {lines[0]!r}', path, 1)

    vectors = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        label, values = parts[0], parts[1:]
        if len(values) != dim:
            raise ParseError(
                f'expected {dim} numbers for {label!r}, got {len(values)}',
                path, lineno)
        try:
            vector = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError as e:
            raise ParseError(f'bad number in vector of {label!r}: {e}', path,
                             lineno)
        if not np.all(np.isfinite(vector)):
            raise ParseError(f'non-finite value in vector of {label!r}', path,
                             lineno)
        if label in vectors:
            raise ParseError(f'duplicate label {label!r}', path, lineno)
        vectors[label] = vector
    if len(vectors) != count:
        raise ParseError(
            f'header announces {count} vectors but the file holds '
            f'{len(vectors)}', path, 1)

    table = EmbeddingTable(dim, vectors)
    if vocabulary is None:
        return table
    return table.restrict(vocabulary)


def save_embeddings(table, path):
    """Write ``table`` in the text layout read by :func:`load_embeddings`."""
    mmcv.mkdir_or_exist(osp.dirname(osp.abspath(path)))
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(f'{len(table)} {table.dim}\n')
        for label in table.labels:
            if any(c.isspace() for c in label):
                raise EmbeddingError(
                    f'label {label!r} contains whitespace')
            values = ' '.join(repr(float(v)) for v in table[label])
            f.write(f'{label} {values}\n')


def cosine_distance(a, b):
    """``1 - a.b / (|a| |b|)``, in [0, 2]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise EmbeddingError(
            f'dimension mismatch: {a.shape} vs {b.shape}')
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0 or norm_b == 0:
        raise EmbeddingError('cosine distance is undefined for a zero vector')
    dist = 1.0 - float(np.dot(a, b)) / (norm_a * norm_b)
    return min(max(dist, 0.0), 2.0)


def pairwise_distances(A, B, metric='cosine'):
    """Distances between the rows of ``A`` (n, d) and ``B`` (m, d).

    Args:
        metric (str): 'cosine' or 'euclidean'.

    Returns:
        ndarray: shape (n, m).
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise EmbeddingError(
            f'dimension mismatch: {A.shape[1]} vs {B.shape[1]}')
    if metric == 'cosine':
        for name, M in (('first', A), ('second', B)):
            zero = ~np.any(M, axis=1)
            if zero.any():
                raise EmbeddingError(
                    f'row {int(np.flatnonzero(zero)[0])} of the {name} '
                    'argument is the zero vector, cosine distance is '
                    'undefined for it')
        return cosine_distances(A, B)
    elif metric == 'euclidean':
        return euclidean_distances(A, B)
    raise ValueError(f'metric must be "cosine" or "euclidean", got {metric}')


def cosine_distance_matrix(A, B):
    return pairwise_distances(A, B, metric='cosine')
