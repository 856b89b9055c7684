import warnings

import numpy as np
from scipy import linalg
from sklearn.exceptions import ConvergenceWarning
from sklearn.multioutput import MultiOutputRegressor
from sklearn.svm import LinearSVR

from mlzsl.utils.exceptions import SolverError, ValidationError
from .builder import REGRESSORS
from .regression_model import RegressionModel, check_pair


def train_independent(X, Y, l2_penalty=1e-4):
    """Closed-form ridge regression, one output column at a time.

    The intercept is an explicit, unpenalised bias column. The penalised
    least-squares problem is solved as an augmented ordinary least-squares
    system, which equals ``dim`` separate single-output ridge fits.

    Args:
        X (ndarray): Features, shape (n, in_features).
        Y (ndarray): Targets, shape (n, dim).
        l2_penalty (float): Ridge coefficient, nonnegative.

    Returns:
        :obj:`RegressionModel`: kind 'independent'.
    """
    if not l2_penalty >= 0:
        raise ValidationError(
            f'l2_penalty must be nonnegative, got {l2_penalty}')
    X, Y = check_pair(X, Y)
    n, d = X.shape
    design = np.hstack([np.ones((n, 1)), X])
    targets = Y
    if l2_penalty > 0:
        penalty = np.hstack(
            [np.zeros((d, 1)), np.sqrt(l2_penalty) * np.eye(d)])
        design = np.vstack([design, penalty])
        targets = np.vstack([Y, np.zeros((d, Y.shape[1]))])

    coef, _, rank, _ = linalg.lstsq(design, targets)
    if rank < d + 1:
        raise SolverError(
            f'the normal equations are singular (design rank {rank} < '
            f'{d + 1}); use a positive l2_penalty')
    return RegressionModel('independent', W2=coef[1:], b2=coef[0])


def train_linear_svr(X, Y, C=10.0, epsilon=0.0, max_iter=10000, seed=0):
    """One linear epsilon-insensitive SVR per output dimension.

    Returns:
        :obj:`RegressionModel`: kind 'independent'.
    """
    if not C > 0:
        raise ValidationError(f'C must be positive, got {C}')
    X, Y = check_pair(X, Y)
    estimator = MultiOutputRegressor(
        LinearSVR(
            C=C,
            epsilon=epsilon,
            loss='epsilon_insensitive',
            max_iter=max_iter,
            random_state=seed))
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', ConvergenceWarning)
        estimator.fit(X, Y)
    W = np.stack([e.coef_ for e in estimator.estimators_], axis=1)
    b = np.array([float(np.ravel(e.intercept_)[0])
                  for e in estimator.estimators_])
    return RegressionModel('independent', W2=W, b2=b)


@REGRESSORS.register_module()
class IndependentRegressor(object):
    """Per-output ridge regression baseline."""
    kind = 'independent'

    def __init__(self, l2_penalty=1e-4, seed=0):
        if not l2_penalty >= 0:
            raise ValidationError(
                f'l2_penalty must be nonnegative, got {l2_penalty}')
        self.l2_penalty = l2_penalty
        # closed form, nothing is random
        self.seed = seed

    def fit(self, X, Y, logger=None):
        return train_independent(X, Y, self.l2_penalty)

    def __repr__(self):
        return f'{self.__class__.__name__}(l2_penalty={self.l2_penalty})'


@REGRESSORS.register_module()
class LinearSVRRegressor(object):
    """Per-output linear SVR baseline."""
    kind = 'independent'

    def __init__(self, C=10.0, epsilon=0.0, max_iter=10000, seed=0):
        self.C = C
        self.epsilon = epsilon
        self.max_iter = max_iter
        self.seed = seed

    def fit(self, X, Y, logger=None):
        return train_linear_svr(
            X,
            Y,
            C=self.C,
            epsilon=self.epsilon,
            max_iter=self.max_iter,
            seed=self.seed % 2**32)

    def __repr__(self):
        return f'{self.__class__.__name__}(C={self.C}, epsilon={self.epsilon})'
