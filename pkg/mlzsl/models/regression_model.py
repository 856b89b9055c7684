import os.path as osp

import mmcv
import numpy as np
import torch

from mlzsl.utils.exceptions import ValidationError

KINDS = ('joint', 'independent')
ACTIVATIONS = ('relu', 'tanh')


def _as_matrix(X, name):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValidationError(
            f'{name} must be a non-empty 2-D matrix, got shape {X.shape}')
    if not np.all(np.isfinite(X)):
        raise ValidationError(f'{name} contains non-finite entries')
    return X


def check_pair(X, Y):
    """Validate a (features, targets) training pair."""
    X = _as_matrix(X, 'feature matrix')
    Y = _as_matrix(Y, 'target matrix')
    if X.shape[0] != Y.shape[0]:
        raise ValidationError(
            f'row mismatch: {X.shape[0]} feature rows vs {Y.shape[0]} '
            'target rows')
    return X, Y


def build_targets(labels, embedding_matrix):
    """Training targets ``Y = L V``: the summed word vectors of each row's
    labels.

    Args:
        labels (ndarray): binary, shape (n, m).
        embedding_matrix (ndarray): shape (m, dim).
    """
    labels = np.asarray(labels, dtype=np.float64)
    embedding_matrix = np.asarray(embedding_matrix, dtype=np.float64)
    if labels.shape[1] != embedding_matrix.shape[0]:
        raise ValidationError(
            f'{labels.shape[1]} label columns vs '
            f'{embedding_matrix.shape[0]} word vectors')
    return labels @ embedding_matrix


class RegressionModel(object):
    """Parameters of the feature -> word-space map.

    ``joint``: ``act(x W1 + b1) W2 + b2``; ``independent``: ``x W2 + b2``
    (one linear regressor per output dimension).

    Args:
        kind (str): 'joint' or 'independent'.
        W2 (ndarray): (hidden, dim) for joint, (in_features, dim) otherwise.
        b2 (ndarray): (dim, ).
        W1 (ndarray, optional): (in_features, hidden), joint only.
        b1 (ndarray, optional): (hidden, ), joint only.
        activation (str): Hidden non-linearity of the joint kind.
        loss_history (list[float], optional): Training loss per epoch.
    """

    def __init__(self,
                 kind,
                 W2,
                 b2,
                 W1=None,
                 b1=None,
                 activation='relu',
                 loss_history=None):
        if kind not in KINDS:
            raise ValidationError(f'kind must be one of {KINDS}, got {kind}')
        if activation not in ACTIVATIONS:
            raise ValidationError(
                f'activation must be one of {ACTIVATIONS}, got {activation}')
        self.kind = kind
        self.activation = activation
        self.W2 = self._param(W2, 'W2', 2)
        self.b2 = self._param(b2, 'b2', 1)
        if kind == 'joint':
            if W1 is None or b1 is None:
                raise ValidationError('a joint model needs W1 and b1')
            self.W1 = self._param(W1, 'W1', 2)
            self.b1 = self._param(b1, 'b1', 1)
            if self.W1.shape[1] < 1:
                raise ValidationError('a joint model needs hidden units')
            assert self.b1.shape[0] == self.W1.shape[1]
            assert self.W2.shape[0] == self.W1.shape[1]
        else:
            if W1 is not None or b1 is not None:
                raise ValidationError(
                    'an independent model has no hidden layer')
            self.W1 = None
            self.b1 = None
        assert self.b2.shape[0] == self.W2.shape[1]
        self.loss_history = list(loss_history or [])

    @staticmethod
    def _param(value, name, ndim):
        value = np.array(value, dtype=np.float64)
        if value.ndim != ndim:
            raise ValidationError(
                f'{name} must be {ndim}-D, got shape {value.shape}')
        if not np.all(np.isfinite(value)):
            raise ValidationError(f'{name} contains non-finite entries')
        value.setflags(write=False)
        return value

    @property
    def in_features(self):
        return (self.W1 if self.kind == 'joint' else self.W2).shape[0]

    @property
    def out_features(self):
        return self.W2.shape[1]

    @property
    def hidden_units(self):
        return self.W1.shape[1] if self.kind == 'joint' else 0

    def parameters(self):
        """Name -> array, in a fixed order."""
        if self.kind == 'joint':
            return dict(W1=self.W1, b1=self.b1, W2=self.W2, b2=self.b2)
        return dict(W2=self.W2, b2=self.b2)

    def replace(self, **params):
        """Copy with some parameters swapped (used by gradient checks)."""
        merged = self.parameters()
        merged.update(params)
        return RegressionModel(
            self.kind, activation=self.activation, **merged)

    def predict(self, X):
        return predict(self, X)

    def __repr__(self):
        return (f'{self.__class__.__name__}(kind={self.kind}, '
                f'in_features={self.in_features}, '
                f'hidden_units={self.hidden_units}, '
                f'out_features={self.out_features})')


def activate(h, activation):
    if activation == 'relu':
        return np.maximum(h, 0.0)
    return np.tanh(h)


def predict(model, X):
    """Predicted word vectors, one row per instance.

    Returns:
        ndarray: shape (n, dim).
    """
    X = _as_matrix(X, 'feature matrix')
    if X.shape[1] != model.in_features:
        raise ValidationError(
            f'feature width {X.shape[1]} does not match the model input '
            f'width {model.in_features}')
    if model.kind == 'joint':
        X = activate(X @ model.W1 + model.b1, model.activation)
    return X @ model.W2 + model.b2


def save_model(model, path, **meta):
    """Serialise ``model`` plus ``meta`` keys such as the config hash and
    seed. ``.json`` is lossless text; anything else is a torch checkpoint."""
    mmcv.mkdir_or_exist(osp.dirname(osp.abspath(path)))
    params = model.parameters()
    if path.endswith('.json'):
        obj = dict(meta)
        obj.update(
            kind=model.kind,
            activation=model.activation,
            shapes={k: list(v.shape)
                    for k, v in params.items()},
            params={k: v.ravel().tolist()
                    for k, v in params.items()},
            loss_history=[float(x) for x in model.loss_history])
        mmcv.dump(obj, path, file_format='json')
    else:
        torch.save(
            dict(
                meta,
                kind=model.kind,
                activation=model.activation,
                state_dict={k: torch.from_numpy(v.copy())
                            for k, v in params.items()},
                loss_history=list(model.loss_history)), path)


def load_model(path):
    """Inverse of :func:`save_model`."""
    if path.endswith('.json'):
        obj = mmcv.load(path, file_format='json')
        try:
            params = {
                k: np.asarray(v, dtype=np.float64).reshape(obj['shapes'][k])
                for k, v in obj['params'].items()
            }
            kind, activation = obj['kind'], obj.get('activation', 'relu')
        except (KeyError, ValueError) as e:
            raise ValidationError(f'{path}: malformed model file ({e})')
        history = obj.get('loss_history')
    else:
        ckpt = torch.load(path, map_location='cpu')
        params = {k: v.numpy() for k, v in ckpt['state_dict'].items()}
        kind, activation = ckpt['kind'], ckpt.get('activation', 'relu')
        history = ckpt.get('loss_history')
    return RegressionModel(
        kind, activation=activation, loss_history=history, **params)
