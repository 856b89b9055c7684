import numpy as np

from mlzsl.utils.exceptions import ValidationError

METHODS = ('exdap', 'dmp', 'tramp')


class PredictionResult(object):
    """Per-instance label scores and the label sets derived from them.

    Args:
        scores (ndarray): shape (n_T, m_T); higher means more confident.
        binary (ndarray): 0/1, shape (n_T, m_T).
        method (str): One of 'exdap', 'dmp', 'tramp'.
        flagged (Sequence[int]): Instances whose prediction was undefined
            (e.g. an all-zero predicted word vector); they get empty rows.
        assignment (ndarray, optional): Chosen prototype row per instance
            (-1 when flagged). DMP only.
    """

    def __init__(self, scores, binary, method, flagged=(), assignment=None):
        scores = np.array(scores, dtype=np.float64)
        binary = np.array(binary)
        if method not in METHODS:
            raise ValidationError(
                f'method must be one of {METHODS}, got {method}')
        if scores.ndim != 2 or scores.shape != binary.shape:
            raise ValidationError(
                f'scores {scores.shape} and binary {binary.shape} must be '
                'matrices of the same shape')
        if not np.all(np.isfinite(scores)):
            raise ValidationError('scores contain non-finite entries')
        if not np.all((binary == 0) | (binary == 1)):
            raise ValidationError('binary predictions must be 0 or 1')
        self.scores = scores
        self.binary = binary.astype(np.uint8)
        self.method = method
        self.flagged = tuple(int(i) for i in flagged)
        self.assignment = (None if assignment is None else np.asarray(
            assignment, dtype=np.int64))

    @property
    def num_instances(self):
        return self.scores.shape[0]

    @property
    def num_labels(self):
        return self.scores.shape[1]

    def label_names(self, vocabulary):
        """Predicted label names of every instance."""
        assert len(vocabulary) == self.num_labels
        return [[vocabulary[j] for j in np.flatnonzero(row)]
                for row in self.binary]

    def __repr__(self):
        return (f'{self.__class__.__name__}(method={self.method}, '
                f'num_instances={self.num_instances}, '
                f'num_labels={self.num_labels}, flagged={len(self.flagged)})')


def rank_labels(result):
    """Labels of every instance sorted by descending score.

    Ties keep ascending label index.

    Args:
        result (:obj:`PredictionResult` | ndarray): Result or raw scores of
            shape (n, m).

    Returns:
        ndarray: int64 permutation per row, shape (n, m).
    """
    scores = result.scores if isinstance(result, PredictionResult) else \
        np.asarray(result, dtype=np.float64)
    if scores.ndim != 2:
        raise ValidationError(f'scores must be 2-D, got shape {scores.shape}')
    if not np.all(np.isfinite(scores)):
        raise ValidationError('scores contain non-finite entries')
    return np.argsort(-scores, axis=1, kind='stable')


def binarize(scores, threshold=0.5):
    """``scores >= threshold`` as 0/1."""
    return (np.asarray(scores) >= threshold).astype(np.uint8)
