import logging
import warnings

import numpy as np
from mmcv.utils import print_log
from scipy import sparse
from scipy.sparse.linalg import splu

from mlzsl.utils.exceptions import SolverError, ValidationError
from .builder import PREDICTORS
from .knn_graph import build_knn_graph
from .result import PredictionResult, binarize


def _solve(A, B):
    lu = splu(A.tocsc())
    X = lu.solve(np.ascontiguousarray(B, dtype=np.float64))
    if not np.all(np.isfinite(X)):
        raise RuntimeError('Factor is numerically singular')
    return X


def tramp_predict(graph,
                  label_matrix,
                  threshold=0.5,
                  regularization=1e-10,
                  logger=None):
    """Propagate prototype label sets to the test instances in closed form.

    With ``A = I - w`` partitioned into test (U) and prototype (L) blocks,
    the scores are ``-A_UU^{-1} A_UL L_P = (I - w_UU)^{-1} w_UL L_P``.

    Args:
        graph (:obj:`KnnGraph`): Graph from :func:`build_knn_graph`.
        label_matrix (ndarray): Binary label sets of the prototypes,
            shape (n_prototypes, m_T).
        threshold (float): Scores at or above it become positive labels.
        regularization (float): ``eps`` added to the diagonal of ``A_UU``
            when the plain factorisation reports singularity.

    Returns:
        :obj:`PredictionResult`
    """
    L_P = np.asarray(label_matrix, dtype=np.float64)
    if L_P.ndim != 2 or L_P.shape[0] != graph.n_prototypes:
        raise ValidationError(
            f'label matrix of shape {L_P.shape} does not match '
            f'{graph.n_prototypes} prototype nodes')
    w_UU, w_UL = graph.blocks()
    n = graph.n_test
    A_UU = sparse.identity(n, format='csr') - w_UU
    B = w_UL @ L_P

    try:
        scores = _solve(A_UU, B)
    except RuntimeError:
        msg = (f'A_UU is singular (some test instances cannot reach a '
               f'prototype); adding {regularization:g} * I before solving')
        warnings.warn(msg, RuntimeWarning)
        print_log(msg, logger=logger, level=logging.WARNING)
        try:
            scores = _solve(A_UU + regularization * sparse.identity(n), B)
        except RuntimeError:
            smallest = float(
                np.linalg.svd(A_UU.toarray(), compute_uv=False).min())
            raise SolverError(
                'A_UU stays singular after regularisation; smallest '
                f'singular value {smallest:.3g}')
    return PredictionResult(scores, binarize(scores, threshold), 'tramp')


def propagate_iterative(graph, label_matrix, tol=1e-10, max_iter=100000):
    """Iterate ``F <- w F`` with the prototype rows clamped to ``L_P``.

    Converges to the closed form of :func:`tramp_predict` whenever the
    spectral radius of ``w_UU`` is below 1.

    Returns:
        ndarray: Test-instance scores, shape (n_T, m_T).
    """
    L_P = np.asarray(label_matrix, dtype=np.float64)
    w_UU, w_UL = graph.blocks()
    clamped = w_UL @ L_P
    F = np.zeros((graph.n_test, L_P.shape[1]))
    for _ in range(max_iter):
        F_next = w_UU @ F + clamped
        delta = np.max(np.abs(F_next - F)) if F.size else 0.0
        F = F_next
        if delta < tol:
            return F
    raise SolverError(
        f'label propagation did not converge in {max_iter} iterations')


@PREDICTORS.register_module()
class TraMP(object):
    """Transductive label propagation from prototypes over a kNN graph."""
    name = 'tramp'

    def __init__(self,
                 k=10,
                 metric='cosine',
                 sigma_mode='median_sq',
                 prototype_neighbors='all',
                 threshold=0.5,
                 regularization=1e-10):
        self.k = k
        self.metric = metric
        self.sigma_mode = sigma_mode
        self.prototype_neighbors = prototype_neighbors
        self.threshold = threshold
        self.regularization = regularization

    def build_graph(self, Y_hat, prototypes, logger=None):
        return build_knn_graph(
            Y_hat,
            prototypes,
            self.k,
            metric=self.metric,
            sigma_mode=self.sigma_mode,
            prototype_neighbors=self.prototype_neighbors,
            logger=logger)

    def predict(self, Y_hat, prototypes, label_embeddings=None, logger=None):
        graph = self.build_graph(Y_hat, prototypes, logger=logger)
        return tramp_predict(
            graph,
            prototypes.label_matrix,
            threshold=self.threshold,
            regularization=self.regularization,
            logger=logger)
