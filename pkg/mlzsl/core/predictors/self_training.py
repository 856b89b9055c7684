import logging

import numpy as np
from mmcv.utils import print_log

from mlzsl.core.wordspace import pairwise_distances
from mlzsl.utils.exceptions import EmbeddingError, ValidationError


def self_train_prototypes(prototypes,
                          Y_hat,
                          k,
                          metric='cosine',
                          logger=None):
    """One self-training step: move every prototype to the mean of its ``k``
    nearest predicted test vectors.

    Args:
        prototypes (:obj:`PrototypeSet`): Synthesised prototypes.
        Y_hat (ndarray): Predicted test word vectors, shape (n_T, dim).
        k (int): Neighbours averaged per prototype, ``1 <= k <= n_T``.
        metric (str): 'cosine' (default) or 'euclidean'.

    Returns:
        :obj:`PrototypeSet`: Same label combinations, rows marked refined.
    """
    Y_hat = np.atleast_2d(np.asarray(Y_hat, dtype=np.float64))
    if int(k) != k or k < 1:
        raise ValidationError(f'k must be a positive integer, got {k}')
    pool = Y_hat
    if metric == 'cosine':
        nonzero = np.any(Y_hat, axis=1)
        if not nonzero.all():
            print_log(
                f'self-training: ignoring {int((~nonzero).sum())} all-zero '
                'predicted word vector(s)',
                logger=logger,
                level=logging.WARNING)
        pool = Y_hat[nonzero]
    if k > pool.shape[0]:
        raise ValidationError(
            f'k={k} exceeds the {pool.shape[0]} usable test predictions')

    dist = pairwise_distances(prototypes.prototypes, pool, metric)
    neighbors = np.argsort(dist, axis=1, kind='stable')[:, :k]
    refined = pool[neighbors].mean(axis=1)

    zero = ~np.any(refined, axis=1)
    if zero.any():
        j = int(np.flatnonzero(zero)[0])
        names = prototypes.subset(j).names(prototypes.vocabulary)
        raise EmbeddingError(
            f'the refined prototype of {names} is the zero vector')
    return prototypes.with_prototypes(refined, refined=True)
