import logging

import numpy as np
from mmcv.utils import print_log
from scipy import sparse

from mlzsl.core.wordspace import pairwise_distances
from mlzsl.utils.exceptions import ValidationError

SIGMA_MODES = ('median_sq', 'median')
NEIGHBOR_POOLS = ('all', 'test')
ROW_BLOCK = 2048


class KnnGraph(object):
    """Row-stochastic kNN graph over test predictions and prototypes.

    Nodes ``0 .. n_test - 1`` are the test instances, the remaining
    ``n_prototypes`` nodes are the prototypes in their canonical order.

    Attributes:
        weights (scipy.sparse.csr_matrix): shape (node_count, node_count),
            no self-loops, every nonzero row sums to 1.
        k (int): Neighbours per node.
        sigma_sq (float): Squared kernel bandwidth used in the exponent
            ``-d^2 / (2 sigma_sq)``.
        metric (str): Distance used for neighbours and the kernel.
    """

    def __init__(self, weights, k, sigma_sq, n_test, n_prototypes,
                 metric='cosine'):
        assert weights.shape == (n_test + n_prototypes, ) * 2
        self.weights = sparse.csr_matrix(weights)
        self.k = int(k)
        self.sigma_sq = float(sigma_sq)
        self.n_test = int(n_test)
        self.n_prototypes = int(n_prototypes)
        self.metric = metric

    @property
    def node_count(self):
        return self.n_test + self.n_prototypes

    @property
    def sigma(self):
        return float(np.sqrt(self.sigma_sq))

    def blocks(self):
        """``(w_UU, w_UL)``: test->test and test->prototype weights."""
        W = self.weights
        u = self.n_test
        return W[:u, :u].tocsr(), W[:u, u:].tocsr()

    def __repr__(self):
        return (f'{self.__class__.__name__}(node_count={self.node_count}, '
                f'k={self.k}, sigma_sq={self.sigma_sq:.4g}, '
                f'metric={self.metric})')


def _nearest(block, k):
    """Indices of the ``k`` smallest finite entries of every row of
    ``block``. Among equal distances the lower column index wins.

    Returns:
        tuple[ndarray]: Row and column indices, row-major.
    """
    kth = np.partition(block, k - 1, axis=1)[:, k - 1:k]
    take = block < kth
    ties = (block == kth) & np.isfinite(kth)
    fill = k - take.sum(axis=1, keepdims=True)
    take |= ties & (np.cumsum(ties, axis=1) <= fill)
    return np.nonzero(take)


def build_knn_graph(Y_hat,
                    prototypes,
                    k,
                    metric='cosine',
                    sigma_mode='median_sq',
                    prototype_neighbors='all',
                    logger=None):
    """Gaussian-weighted kNN graph over ``[Y_hat; P]``.

    Args:
        Y_hat (ndarray): Predicted word vectors, shape (n_T, dim).
        prototypes (:obj:`PrototypeSet`): Label-combination prototypes.
        k (int): Neighbours per node, ``1 <= k < node_count``. A node is
            never its own neighbour; ties go to the lower node index.
        metric (str): 'cosine' (default) or 'euclidean'.
        sigma_mode (str): 'median_sq' sets ``sigma^2`` to the median
            squared pairwise distance; 'median' sets ``sigma`` itself to it.
        prototype_neighbors (str): 'all' lets prototype nodes link to other
            prototypes; 'test' restricts them to test nodes.

    Returns:
        :obj:`KnnGraph`
    """
    if sigma_mode not in SIGMA_MODES:
        raise ValidationError(
            f'sigma_mode must be one of {SIGMA_MODES}, got {sigma_mode}')
    if prototype_neighbors not in NEIGHBOR_POOLS:
        raise ValidationError(f'prototype_neighbors must be one of '
                              f'{NEIGHBOR_POOLS}, got {prototype_neighbors}')
    Y_hat = np.atleast_2d(np.asarray(Y_hat, dtype=np.float64))
    n_test = Y_hat.shape[0]
    pooled = np.vstack([Y_hat, prototypes.prototypes])
    N = pooled.shape[0]
    if int(k) != k or k <= 0:
        raise ValidationError(f'k must be a positive integer, got {k}')
    if k >= N:
        raise ValidationError(
            f'k={k} must be smaller than the node count {N}')

    dist = pairwise_distances(pooled, pooled, metric)
    upper = np.triu(np.ones((N, N), dtype=bool), 1)
    median = float(np.median(np.square(dist[upper])))
    del upper
    sigma_sq = median if sigma_mode == 'median_sq' else median**2
    if not sigma_sq > np.finfo(np.float64).eps:
        raise ValidationError(
            'kernel bandwidth is zero: (nearly) all nodes coincide in the '
            'word space')

    # from here on dist doubles as the candidate matrix
    np.fill_diagonal(dist, np.inf)
    if prototype_neighbors == 'test':
        dist[n_test:, n_test:] = np.inf
    rows, cols = [], []
    for start in range(0, N, ROW_BLOCK):
        r, c = _nearest(dist[start:start + ROW_BLOCK], k)
        rows.append(r + start)
        cols.append(c)
    rows, cols = np.concatenate(rows), np.concatenate(cols)

    values = np.exp(-np.square(dist[rows, cols]) / (2.0 * sigma_sq))
    row_sum = np.bincount(rows, weights=values, minlength=N)
    empty = row_sum[rows] == 0
    if empty.any():
        print_log(
            f'kNN graph: {len(np.unique(rows[empty]))} node(s) have all '
            'neighbour weights underflow to zero and stay isolated',
            logger=logger,
            level=logging.WARNING)
    values = np.where(empty, 0.0, values / np.where(empty, 1.0,
                                                     row_sum[rows]))
    weights = sparse.csr_matrix((values, (rows, cols)), shape=(N, N))
    weights.eliminate_zeros()
    return KnnGraph(weights, k, sigma_sq, n_test, len(prototypes), metric)
