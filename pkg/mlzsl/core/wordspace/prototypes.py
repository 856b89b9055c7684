import numpy as np

from mlzsl.utils.exceptions import (EmbeddingError, PowerSetCapError,
                                    ValidationError)

MAX_POWER_SET_LABELS = 20


class LabelSet(object):
    """An ordered set of label indices into a vocabulary of ``num_labels``.

    Members are stored strictly increasing; duplicates are rejected.
    """

    def __init__(self, members, num_labels):
        members = [int(i) for i in members]
        if len(set(members)) != len(members):
            raise ValidationError(f'duplicate label index in {members}')
        for i in members:
            if not 0 <= i < num_labels:
                raise ValidationError(
                    f'label index {i} out of range [0, {num_labels})')
        self.members = tuple(sorted(members))
        self.num_labels = int(num_labels)

    @classmethod
    def from_bitmask(cls, mask, num_labels):
        return cls([i for i in range(num_labels) if (mask >> i) & 1],
                   num_labels)

    @classmethod
    def from_binary(cls, row):
        row = np.asarray(row)
        return cls(np.flatnonzero(row), row.shape[0])

    @property
    def bitmask(self):
        mask = 0
        for i in self.members:
            mask |= 1 << i
        return mask

    def to_binary(self):
        row = np.zeros(self.num_labels, dtype=np.uint8)
        row[list(self.members)] = 1
        return row

    def names(self, vocabulary):
        return [vocabulary[i] for i in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        return (isinstance(other, LabelSet) and self.members == other.members
                and self.num_labels == other.num_labels)

    def __hash__(self):
        return hash((self.members, self.num_labels))

    def __repr__(self):
        return f'LabelSet({list(self.members)}, num_labels={self.num_labels})'


def synthesize_prototype(table, subset, vocabulary=None):
    """Word vector of a label combination: the sum of its members' vectors.

    Args:
        table (:obj:`EmbeddingTable`): Word vectors.
        subset (:obj:`LabelSet` | Iterable[str]): Indices into
            ``vocabulary`` or label strings.
        vocabulary (list[str], optional): Required when ``subset`` is a
            :obj:`LabelSet`.

    Returns:
        ndarray: shape (dim, ).
    """
    if isinstance(subset, LabelSet):
        if vocabulary is None:
            raise ValidationError('a LabelSet needs the vocabulary it '
                                  'indexes into')
        if len(vocabulary) != subset.num_labels:
            raise ValidationError(
                f'LabelSet indexes {subset.num_labels} labels but the '
                f'vocabulary has {len(vocabulary)}')
        labels = subset.names(vocabulary)
    else:
        labels = list(subset)
        if len(set(labels)) != len(labels):
            raise ValidationError(f'duplicate label in {labels}')
        # a fixed summation order keeps the result permutation invariant
        if vocabulary is not None:
            position = {label: i for i, label in enumerate(vocabulary)}
            missing = [label for label in labels if label not in position]
            if missing:
                raise EmbeddingError(
                    f'label not in vocabulary: {missing[0]!r}')
            labels.sort(key=position.__getitem__)
        else:
            labels.sort()
    if not labels:
        raise ValidationError(
            'the empty label set has no prototype (its sum is the zero '
            'vector)')
    prototype = np.zeros(table.dim, dtype=np.float64)
    for label in labels:
        prototype = prototype + table[label]
    return prototype


class PrototypeSet(object):
    """Synthesised word vectors of every nonempty label combination.

    Rows follow ascending label bitmask, so row ``j`` holds the combination
    with bitmask ``j + 1`` unless the empty set was explicitly included.

    Args:
        prototypes (ndarray): shape (num_prototypes, dim).
        label_matrix (ndarray): binary, shape (num_prototypes, num_labels).
        vocabulary (list[str]): Target label names.
        refined (ndarray, optional): bool per row, True once a row was moved
            by self-training. Defaults to all False.
    """

    def __init__(self, prototypes, label_matrix, vocabulary, refined=None):
        prototypes = np.array(prototypes, dtype=np.float64)
        label_matrix = np.array(label_matrix, dtype=np.uint8)
        assert prototypes.ndim == 2 and label_matrix.ndim == 2
        assert prototypes.shape[0] == label_matrix.shape[0]
        assert label_matrix.shape[1] == len(vocabulary)
        if refined is None:
            refined = np.zeros(prototypes.shape[0], dtype=bool)
        refined = np.array(refined, dtype=bool)
        assert refined.shape == (prototypes.shape[0], )

        weights = 1 << np.arange(label_matrix.shape[1], dtype=np.int64)
        self.bitmasks = label_matrix.astype(np.int64) @ weights
        if len(np.unique(self.bitmasks)) != len(self.bitmasks):
            raise ValidationError('a label combination appears twice')
        self.cardinality = label_matrix.sum(axis=1).astype(np.int64)
        for arr in (prototypes, label_matrix, refined, self.bitmasks,
                    self.cardinality):
            arr.setflags(write=False)
        self.prototypes = prototypes
        self.label_matrix = label_matrix
        self.vocabulary = tuple(vocabulary)
        self.refined = refined
        # smallest combination first, then lowest bitmask
        self.tie_order = np.lexsort((self.bitmasks, self.cardinality))

    def __len__(self):
        return self.prototypes.shape[0]

    def __repr__(self):
        return (f'{self.__class__.__name__}(num_prototypes={len(self)}, '
                f'num_labels={self.num_labels}, dim={self.dim}, '
                f'refined={bool(self.refined.any())})')

    @property
    def num_labels(self):
        return self.label_matrix.shape[1]

    @property
    def dim(self):
        return self.prototypes.shape[1]

    @property
    def has_empty(self):
        return bool(np.any(self.bitmasks == 0))

    def subset(self, j):
        """:obj:`LabelSet` of row ``j``."""
        return LabelSet.from_binary(self.label_matrix[j])

    def row_of(self, subset):
        """Row index of a :obj:`LabelSet`."""
        hit = np.flatnonzero(self.bitmasks == subset.bitmask)
        if hit.size == 0:
            raise ValidationError(f'{subset} is not in the prototype set')
        return int(hit[0])

    def with_prototypes(self, prototypes, refined=True):
        """Same label combinations, new vectors (e.g. after self-training)."""
        prototypes = np.asarray(prototypes, dtype=np.float64)
        if prototypes.shape != self.prototypes.shape:
            raise ValidationError(
                f'expected prototypes of shape {self.prototypes.shape}, '
                f'got {prototypes.shape}')
        if isinstance(refined, bool):
            refined = np.full(len(self), refined)
        return PrototypeSet(prototypes, self.label_matrix, self.vocabulary,
                            refined)


def build_power_set(table,
                    vocabulary,
                    max_labels=MAX_POWER_SET_LABELS,
                    include_empty=False):
    """Synthesise the prototype of every label combination of
    ``vocabulary``.

    Args:
        table (:obj:`EmbeddingTable`): Word vectors covering ``vocabulary``.
        vocabulary (list[str]): The ``m_T`` target labels.
        max_labels (int): Cap on ``m_T``; ``2 ** m_T`` rows are materialised.
            Defaults to 20.
        include_empty (bool): Add the empty combination (zero vector) as
            row 0. Only meaningful with Euclidean distance. Defaults to False.

    Returns:
        :obj:`PrototypeSet`
    """
    num_labels = len(vocabulary)
    if num_labels < 1:
        raise ValidationError('at least one target label is required')
    if len(set(vocabulary)) != num_labels:
        raise ValidationError('duplicate label in the target vocabulary')
    if num_labels > max_labels:
        raise PowerSetCapError(
            f'{num_labels} target labels would materialise '
            f'2^{num_labels} - 1 prototypes; the cap is {max_labels} labels '
            '(raise power_set.max_labels deliberately, or use fewer labels)')
    embeddings = table.matrix(vocabulary)

    start = 0 if include_empty else 1
    masks = np.arange(start, 1 << num_labels, dtype=np.int64)
    label_matrix = ((masks[:, None] >> np.arange(num_labels)) & 1).astype(
        np.uint8)
    prototypes = label_matrix.astype(np.float64) @ embeddings

    zero = ~np.any(prototypes, axis=1) & (masks != 0)
    if zero.any():
        j = int(np.flatnonzero(zero)[0])
        names = LabelSet.from_bitmask(int(masks[j]), num_labels).names(
            vocabulary)
        raise EmbeddingError(
            f'the prototype of {names} is the zero vector (its embeddings '
            'cancel out)')
    return PrototypeSet(prototypes, label_matrix, vocabulary)
