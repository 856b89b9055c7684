import logging

import numpy as np
from mmcv.utils import print_log

from mlzsl.core.wordspace import pairwise_distances
from .builder import PREDICTORS
from .result import PredictionResult


def dmp_predict(Y_hat, prototypes, metric='cosine', logger=None):
    """Assign every instance the label set of its nearest prototype.

    Ties go to the smallest label combination, then the lowest bitmask.
    Per-label scores (used for ranking) are the best similarity among the
    prototypes that contain the label.

    Args:
        Y_hat (ndarray): Predicted word vectors, shape (n_T, dim).
        prototypes (:obj:`PrototypeSet`): Candidate label combinations.
        metric (str): 'cosine' (default) or 'euclidean'.

    Returns:
        :obj:`PredictionResult`: ``assignment`` holds the chosen prototype
        row per instance; instances with an all-zero prediction are flagged
        and receive an empty label set.
    """
    Y_hat = np.atleast_2d(np.asarray(Y_hat, dtype=np.float64))
    n, m = Y_hat.shape[0], prototypes.num_labels
    scores = np.zeros((n, m))
    binary = np.zeros((n, m), dtype=np.uint8)
    assignment = np.full(n, -1, dtype=np.int64)

    valid = np.ones(n, dtype=bool)
    if metric == 'cosine':
        valid = np.any(Y_hat, axis=1)
    flagged = np.flatnonzero(~valid)
    if flagged.size:
        print_log(
            f'DMP: {flagged.size} instance(s) have an all-zero predicted '
            f'word vector (cosine undefined), left unlabelled: '
            f'{flagged.tolist()[:10]}',
            logger=logger,
            level=logging.WARNING)
    if not valid.any():
        return PredictionResult(scores, binary, 'dmp', flagged, assignment)

    dist = pairwise_distances(Y_hat[valid], prototypes.prototypes, metric)
    order = prototypes.tie_order
    # argmin returns the first minimum, so scan columns in tie order
    nearest = order[np.argmin(dist[:, order], axis=1)]
    assignment[valid] = nearest
    binary[valid] = prototypes.label_matrix[nearest]

    similarity = 1.0 - dist if metric == 'cosine' else -dist
    label_scores = np.empty((similarity.shape[0], m))
    for j in range(m):
        contains = prototypes.label_matrix[:, j].astype(bool)
        label_scores[:, j] = similarity[:, contains].max(axis=1)
    scores[valid] = label_scores
    return PredictionResult(scores, binary, 'dmp', flagged, assignment)


@PREDICTORS.register_module()
class DMP(object):
    """Nearest synthesised prototype in the word space."""
    name = 'dmp'

    def __init__(self, metric='cosine'):
        self.metric = metric

    def predict(self, Y_hat, prototypes, label_embeddings=None, logger=None):
        return dmp_predict(Y_hat, prototypes, self.metric, logger=logger)
