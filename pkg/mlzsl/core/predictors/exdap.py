import logging
import warnings

import numpy as np
from mmcv.utils import print_log
from scipy import linalg

from mlzsl.utils.exceptions import EmbeddingError, ValidationError
from .builder import PREDICTORS
from .result import PredictionResult, binarize


def exdap_predict(Y_hat,
                  label_embeddings,
                  threshold=0.5,
                  cond_warn=1e8,
                  logger=None):
    """Decode labels linearly from predicted word vectors.

    Solves ``Y_hat = L V`` for ``L`` with the Moore-Penrose pseudo-inverse
    of the label embedding matrix ``V``, treating every label independently.

    Args:
        Y_hat (ndarray): Predicted word vectors, shape (n_T, dim).
        label_embeddings (ndarray): Word vectors of the target labels,
            shape (m_T, dim).
        threshold (float): Scores at or above it become positive labels.
        cond_warn (float): Warn when the condition number of ``V`` exceeds
            it.

    Returns:
        :obj:`PredictionResult`
    """
    Y_hat = np.atleast_2d(np.asarray(Y_hat, dtype=np.float64))
    V = np.atleast_2d(np.asarray(label_embeddings, dtype=np.float64))
    if Y_hat.shape[1] != V.shape[1]:
        raise ValidationError(
            f'predicted vectors have {Y_hat.shape[1]} dimensions, label '
            f'embeddings {V.shape[1]}')
    if not np.all(np.any(V, axis=1)):
        raise EmbeddingError('a target label embedding is the zero vector')
    sv = linalg.svdvals(V)
    cond = np.inf if sv[-1] == 0 else sv[0] / sv[-1]
    if len(sv) < V.shape[0]:
        # more labels than dimensions: rank deficient by construction
        cond = np.inf
    if cond > cond_warn:
        msg = (f'label embedding matrix is ill-conditioned (condition '
               f'number {cond:.3g} > {cond_warn:.0g}); exDAP scores are a '
               'minimum-norm least-squares solution')
        warnings.warn(msg, RuntimeWarning)
        print_log(msg, logger=logger, level=logging.WARNING)
    scores = Y_hat @ linalg.pinv(V)
    return PredictionResult(scores, binarize(scores, threshold), 'exdap')


@PREDICTORS.register_module()
class ExDAP(object):
    """Linear pseudo-inverse decoding, labels treated independently."""
    name = 'exdap'

    def __init__(self, threshold=0.5, cond_warn=1e8):
        self.threshold = threshold
        self.cond_warn = cond_warn

    def predict(self, Y_hat, prototypes, label_embeddings, logger=None):
        return exdap_predict(
            Y_hat,
            label_embeddings,
            threshold=self.threshold,
            cond_warn=self.cond_warn,
            logger=logger)
