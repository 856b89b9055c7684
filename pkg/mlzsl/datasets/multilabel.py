import os.path as osp

import mmcv
import numpy as np

from mlzsl.utils.exceptions import EmbeddingError, ParseError, ValidationError

SPLITS = ('source', 'target')
LABEL_PREFIX = 'l_'
SCORE_PREFIX = 's_'


class MultiLabelDataset(object):
    """Instances with feature vectors and binary label sets.

    Args:
        features (ndarray): shape (n, feature_dim).
        labels (ndarray): 0/1, shape (n, m).
        vocabulary (Sequence[str]): Label names, one per label column.
        split (str): 'source' (training domain) or 'target' (test domain).
        ids (Sequence[str], optional): Unique instance ids. Defaults to the
            row numbers.
        meta (dict, optional): ``key=value`` pairs read from the comment
            line of a dataset file.
    """

    def __init__(self,
                 features,
                 labels,
                 vocabulary,
                 split='source',
                 ids=None,
                 meta=None):
        features = np.array(features, dtype=np.float64)
        labels = np.array(labels)
        vocabulary = tuple(str(v) for v in vocabulary)
        if split not in SPLITS:
            raise ValidationError(
                f'split must be one of {SPLITS}, got {split!r}')
        if features.ndim != 2 or labels.ndim != 2:
            raise ValidationError('features and labels must be matrices')
        if features.shape[0] != labels.shape[0]:
            raise ValidationError(
                f'{features.shape[0]} feature rows but {labels.shape[0]} '
                'label rows')
        if labels.shape[1] != len(vocabulary):
            raise ValidationError(
                f'{labels.shape[1]} label columns but a vocabulary of '
                f'{len(vocabulary)}')
        if len(set(vocabulary)) != len(vocabulary):
            raise ValidationError('vocabulary contains duplicate labels')
        if not np.all(np.isfinite(features)):
            row = int(np.flatnonzero(~np.isfinite(features).all(axis=1))[0])
            raise ValidationError(f'non-finite feature in row {row}')
        if not np.all((labels == 0) | (labels == 1)):
            raise ValidationError('labels must be 0 or 1')
        if ids is None:
            ids = [str(i) for i in range(features.shape[0])]
        ids = tuple(str(i) for i in ids)
        if len(ids) != features.shape[0]:
            raise ValidationError(
                f'{len(ids)} ids for {features.shape[0]} instances')
        seen = set()
        for i in ids:
            if i in seen:
                raise ValidationError(f'duplicate instance id {i!r}')
            seen.add(i)

        self.features = features
        self.labels = labels.astype(np.uint8)
        self.vocabulary = vocabulary
        self.split = split
        self.ids = ids
        self.meta = dict(meta or {})

    def __len__(self):
        return self.features.shape[0]

    def __repr__(self):
        return (f'{self.__class__.__name__}(split={self.split}, '
                f'num_instances={len(self)}, '
                f'feature_dim={self.feature_dim}, '
                f'num_labels={self.num_labels})')

    @property
    def feature_dim(self):
        return self.features.shape[1]

    @property
    def num_labels(self):
        return len(self.vocabulary)

    def multilabel_rate(self):
        """Fraction of instances carrying more than one label."""
        if len(self) == 0:
            return 0.0
        return float(np.mean(self.labels.sum(axis=1) > 1))

    def check_vocabulary(self, table):
        """Raise :obj:`EmbeddingError` if a label has no word vector."""
        for label in self.vocabulary:
            if label not in table:
                raise EmbeddingError(
                    f'{self.split} label not in embedding table: {label!r}')


def check_disjoint(source, target):
    """Source and target label vocabularies must not overlap."""
    shared = sorted(set(source.vocabulary) & set(target.vocabulary))
    if shared:
        raise ValidationError(
            f'source and target share labels: {", ".join(shared)}')


def _format_meta(meta):
    return '# ' + ' '.join(f'{k}={v}' for k, v in meta.items())


def _parse_meta(line):
    meta = {}
    for token in line.lstrip('#').split():
        if '=' in token:
            key, value = token.split('=', 1)
            meta[key] = value
    return meta


def read_table(path):
    """Read a comma-separated artifact with ``#`` comment lines.

    Returns:
        tuple: ``(header, header_lineno, rows, meta)`` where ``rows`` is a
        list of ``(lineno, fields)`` and ``meta`` collects ``key=value``
        tokens of the comment lines.
    """
    if not osp.isfile(path):
        raise FileNotFoundError(f'no such file: {path}')
    header = None
    rows = []
    meta = {}
    for lineno, line in enumerate(mmcv.list_from_file(path), 1):
        if not line.strip():
            continue
        if line.startswith('#'):
            meta.update(_parse_meta(line))
            continue
        fields = [f.strip() for f in line.split(',')]
        if header is None:
            header = fields
            header_lineno = lineno
        else:
            if len(fields) != len(header):
                raise ParseError(
                    f'expected {len(header)} fields as in the header, got '
                    f'{len(fields)}', path, lineno)
            rows.append((lineno, fields))
    if header is None:
        raise ParseError('missing header line', path)
    if header[0] != 'id':
        raise ParseError(f'first column must be "id", got {header[0]!r}',
                         path, header_lineno)
    return header, header_lineno, rows, meta


def _split_header(header, path, lineno, prefixes):
    columns = {p: [] for p in prefixes}
    for name in header[1:]:
        for prefix in prefixes:
            if name.startswith(prefix) and len(name) > len(prefix):
                columns[prefix].append(name[len(prefix):])
                break
        else:
            raise ParseError(f'unexpected column {name!r}', path, lineno)
    return columns


def _parse_ids(rows, path):
    ids = []
    seen = {}
    for lineno, fields in rows:
        i = fields[0]
        if not i:
            raise ParseError('empty instance id', path, lineno)
        if i in seen:
            raise ParseError(
                f'duplicate instance id {i!r} (first seen on line '
                f'{seen[i]})', path, lineno)
        seen[i] = lineno
        ids.append(i)
    return ids


def _parse_floats(rows, start, stop, path):
    out = np.empty((len(rows), stop - start), dtype=np.float64)
    for r, (lineno, fields) in enumerate(rows):
        try:
            out[r] = [float(v) for v in fields[start:stop]]
        except ValueError as e:
            raise ParseError(f'bad number: {e}', path, lineno)
        if not np.all(np.isfinite(out[r])):
            raise ParseError('non-finite value', path, lineno)
    return out


def _parse_binary(rows, start, stop, path):
    out = np.empty((len(rows), stop - start), dtype=np.uint8)
    for r, (lineno, fields) in enumerate(rows):
        values = fields[start:stop]
        bad = [v for v in values if v not in ('0', '1')]
        if bad:
            raise ParseError(f'label entries must be 0 or 1, got {bad[0]!r}',
                             path, lineno)
        out[r] = [int(v) for v in values]
    return out


def load_dataset(path, split=None):
    """Load a dataset CSV.

    The header is ``id,f1,...,fD,l_<label1>,...,l_<labelm>``; label columns
    hold 0/1. Lines starting with ``#`` are comments and may carry
    ``key=value`` pairs (``split=target``, ``config_hash=...``).

    Args:
        path (str): File to read.
        split (str, optional): Overrides the ``split`` recorded in the file.
            Defaults to the recorded one, else 'source'.

    Returns:
        :obj:`MultiLabelDataset`
    """
    header, lineno, rows, meta = read_table(path)
    columns = _split_header(header, path, lineno, ('f', LABEL_PREFIX))
    # feature columns must be f1..fD followed by the label columns
    dim = len(columns['f'])
    expected = [str(i) for i in range(1, dim + 1)]
    if columns['f'] != expected or any(
            not h.startswith(LABEL_PREFIX) for h in header[1 + dim:]):
        raise ParseError(
            'header must be id,f1..fD,l_<label>... in this order', path,
            lineno)
    vocabulary = columns[LABEL_PREFIX]
    if not vocabulary:
        raise ParseError('no label columns', path, lineno)
    if len(set(vocabulary)) != len(vocabulary):
        raise ParseError('duplicate label column', path, lineno)
    if not rows:
        raise ParseError('no instances', path, lineno)

    ids = _parse_ids(rows, path)
    features = _parse_floats(rows, 1, 1 + dim, path)
    labels = _parse_binary(rows, 1 + dim, len(header), path)
    split = split or meta.get('split', 'source')
    return MultiLabelDataset(
        features, labels, vocabulary, split=split, ids=ids, meta=meta)


def _check_writable_names(names, what):
    for name in names:
        if not name or any(c in name for c in ',\n\r') or name != name.strip():
            raise ValidationError(f'{what} {name!r} cannot be written to CSV')


def _write_lines(lines, path):
    mmcv.mkdir_or_exist(osp.dirname(osp.abspath(path)))
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write('\n'.join(lines) + '\n')


def save_dataset(dataset, path, **meta):
    """Write ``dataset`` in the format read by :func:`load_dataset`.

    Floats are written with ``repr`` so reading the file back is exact.
    ``meta`` pairs (e.g. ``config_hash``, ``seed``) go to the comment line.
    """
    _check_writable_names(dataset.ids, 'instance id')
    _check_writable_names(dataset.vocabulary, 'label')
    meta = dict(meta)
    meta['split'] = dataset.split
    header = ['id'] + [f'f{i}' for i in range(1, dataset.feature_dim + 1)] + \
        [LABEL_PREFIX + v for v in dataset.vocabulary]
    lines = [_format_meta(meta), ','.join(header)]
    for i, x, y in zip(dataset.ids, dataset.features, dataset.labels):
        lines.append(','.join([i] + [repr(float(v)) for v in x] +
                              [str(int(v)) for v in y]))
    _write_lines(lines, path)


def dump_label_csv(ids, binary, vocabulary, path, **meta):
    """Predictions artifact: ``id`` plus one 0/1 column per label."""
    _check_writable_names(ids, 'instance id')
    lines = [
        _format_meta(meta),
        ','.join(['id'] + [LABEL_PREFIX + v for v in vocabulary])
    ]
    for i, row in zip(ids, np.asarray(binary)):
        lines.append(','.join([i] + [str(int(v)) for v in row]))
    _write_lines(lines, path)


def dump_score_csv(ids, scores, vocabulary, path, **meta):
    """Scores artifact: ``id`` plus one float column per label."""
    _check_writable_names(ids, 'instance id')
    lines = [
        _format_meta(meta),
        ','.join(['id'] + [SCORE_PREFIX + v for v in vocabulary])
    ]
    for i, row in zip(ids, np.asarray(scores, dtype=np.float64)):
        lines.append(','.join([i] + [repr(float(v)) for v in row]))
    _write_lines(lines, path)


def dump_vector_csv(ids, vectors, path, **meta):
    """Predicted word vectors: ``id`` plus columns ``e1..eD``."""
    _check_writable_names(ids, 'instance id')
    vectors = np.asarray(vectors, dtype=np.float64)
    lines = [
        _format_meta(meta),
        ','.join(['id'] + [f'e{i}' for i in range(1, vectors.shape[1] + 1)])
    ]
    for i, row in zip(ids, vectors):
        lines.append(','.join([i] + [repr(float(v)) for v in row]))
    _write_lines(lines, path)


def load_label_csv(path):
    """Read a predictions, scores or dataset CSV as a label matrix.

    Feature columns are ignored. A file with ``s_`` columns yields float
    scores, otherwise the ``l_`` columns are read as 0/1.

    Returns:
        tuple: ``(ids, matrix, vocabulary, meta)``.
    """
    header, lineno, rows, meta = read_table(path)
    columns = _split_header(header, path, lineno,
                            ('f', LABEL_PREFIX, SCORE_PREFIX))
    if columns[SCORE_PREFIX] and columns[LABEL_PREFIX]:
        raise ParseError('mixed l_ and s_ columns', path, lineno)
    prefix = SCORE_PREFIX if columns[SCORE_PREFIX] else LABEL_PREFIX
    vocabulary = columns[prefix]
    if not vocabulary:
        raise ParseError('no label columns', path, lineno)
    start = header.index(prefix + vocabulary[0])
    if header[start:] != [prefix + v for v in vocabulary]:
        raise ParseError('label columns must come last', path, lineno)
    ids = _parse_ids(rows, path)
    parse = _parse_floats if prefix == SCORE_PREFIX else _parse_binary
    matrix = parse(rows, start, len(header), path)
    return ids, matrix, tuple(vocabulary), meta


def align_rows(ids, matrix, reference_ids, what='predictions'):
    """Reorder ``matrix`` rows from ``ids`` order to ``reference_ids``."""
    index = {i: r for r, i in enumerate(ids)}
    missing = [i for i in reference_ids if i not in index]
    if missing or len(ids) != len(reference_ids):
        detail = f'missing id {missing[0]!r}' if missing else \
            f'{len(ids)} rows vs {len(reference_ids)}'
        raise ValidationError(f'{what} do not match the ground truth: '
                              f'{detail}')
    return np.asarray(matrix)[[index[i] for i in reference_ids]]
