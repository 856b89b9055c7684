import math
from dataclasses import asdict, dataclass

import numpy as np
import torch
import torch.nn as nn
from mmcv.utils import print_log

from mlzsl.utils.exceptions import DivergenceError, ValidationError
from .builder import REGRESSORS
from .regression_model import RegressionModel, check_pair


@dataclass
class TrainConfig:
    """Hyperparameters of the joint multi-output regressor.

    The defaults follow common practice for a 1024-unit ReLU head; nothing
    fixes them beyond the hidden width.
    """
    hidden_units: int = 1024
    learning_rate: float = 1e-3
    epochs: int = 200
    batch_size: int = 64
    l2_penalty: float = 1e-4
    seed: int = 0
    optimizer: str = 'Adam'
    momentum: float = 0.9
    activation: str = 'relu'
    log_interval: int = 0

    def __post_init__(self):
        for name in ('hidden_units', 'epochs', 'batch_size'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValidationError(
                    f'{name} must be a positive integer, got {value}')
        if not self.learning_rate > 0:
            raise ValidationError(
                f'learning_rate must be positive, got {self.learning_rate}')
        if not self.l2_penalty >= 0:
            raise ValidationError(
                f'l2_penalty must be nonnegative, got {self.l2_penalty}')
        if self.optimizer not in ('Adam', 'SGD'):
            raise ValidationError(
                f'optimizer must be "Adam" or "SGD", got {self.optimizer}')
        if not 0 <= self.momentum < 1:
            raise ValidationError(
                f'momentum must be in [0, 1), got {self.momentum}')
        if self.activation not in ('relu', 'tanh'):
            raise ValidationError(
                f'activation must be "relu" or "tanh", got {self.activation}')

    def to_dict(self):
        return asdict(self)


class WordSpaceHead(nn.Module):
    """Fully connected hidden layer followed by one least-squares output per
    word-space dimension."""

    def __init__(self,
                 in_features,
                 out_features,
                 hidden_units=1024,
                 activation='relu'):
        super(WordSpaceHead, self).__init__()
        self.fc = nn.Linear(in_features, hidden_units).double()
        self.act = nn.ReLU() if activation == 'relu' else nn.Tanh()
        self.out = nn.Linear(hidden_units, out_features).double()
        self.activation = activation

    def init_weights(self, generator):
        """He-scaled normal weights for the hidden layer, LeCun-scaled for
        the output layer, zero biases."""
        with torch.no_grad():
            for layer, gain in ((self.fc, 2.0), (self.out, 1.0)):
                std = math.sqrt(gain / layer.in_features)
                layer.weight.copy_(
                    torch.randn(
                        layer.weight.shape,
                        generator=generator,
                        dtype=torch.float64) * std)
                layer.bias.zero_()

    def forward(self, x):
        return self.out(self.act(self.fc(x)))

    def to_model(self, loss_history=None):
        # nn.Linear stores (out, in); the model stores (in, out)
        return RegressionModel(
            'joint',
            W1=self.fc.weight.detach().numpy().T,
            b1=self.fc.bias.detach().numpy(),
            W2=self.out.weight.detach().numpy().T,
            b2=self.out.bias.detach().numpy(),
            activation=self.activation,
            loss_history=loss_history)


def regression_loss(pred, target, weights, l2_penalty):
    """Mean squared error over all entries plus ``l2_penalty`` times the
    squared norm of the weight matrices (biases excluded)."""
    loss = torch.mean((pred - target)**2)
    if l2_penalty > 0:
        loss = loss + l2_penalty * sum(torch.sum(w**2) for w in weights)
    return loss


def _build_optimizer(module, cfg):
    if cfg.optimizer == 'SGD':
        return torch.optim.SGD(
            module.parameters(), lr=cfg.learning_rate, momentum=cfg.momentum)
    return torch.optim.Adam(module.parameters(), lr=cfg.learning_rate)


def train_joint(X, Y, cfg=None, logger=None):
    """Fit the joint regressor by mini-batch gradient descent.

    Args:
        X (ndarray): Features, shape (n, in_features).
        Y (ndarray): Word-space targets, shape (n, dim).
        cfg (:obj:`TrainConfig`, optional): Hyperparameters.
        logger (logging.Logger | str, optional): Where progress goes.

    Returns:
        :obj:`RegressionModel`: kind 'joint'; ``loss_history`` holds the
        full-data training loss after every epoch.
    """
    cfg = cfg or TrainConfig()
    X, Y = check_pair(X, Y)
    n = X.shape[0]
    generator = torch.Generator().manual_seed(int(cfg.seed))

    module = WordSpaceHead(X.shape[1], Y.shape[1], cfg.hidden_units,
                           cfg.activation)
    module.init_weights(generator)
    optimizer = _build_optimizer(module, cfg)
    weights = (module.fc.weight, module.out.weight)
    X_t = torch.from_numpy(X)
    Y_t = torch.from_numpy(Y)

    history = []
    for epoch in range(1, cfg.epochs + 1):
        if cfg.batch_size >= n:
            order = torch.arange(n)
        else:
            order = torch.randperm(n, generator=generator)
        module.train()
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            optimizer.zero_grad()
            loss = regression_loss(
                module(X_t[idx]), Y_t[idx], weights, cfg.l2_penalty)
            if not torch.isfinite(loss):
                raise DivergenceError(epoch, loss.item())
            loss.backward()
            optimizer.step()
        module.eval()
        with torch.no_grad():
            epoch_loss = regression_loss(
                module(X_t), Y_t, weights, cfg.l2_penalty).item()
        if not math.isfinite(epoch_loss):
            raise DivergenceError(epoch, epoch_loss)
        history.append(epoch_loss)
        if cfg.log_interval and epoch % cfg.log_interval == 0:
            print_log(
                f'Epoch [{epoch}/{cfg.epochs}] loss: {epoch_loss:.6g}',
                logger=logger)

    for w in module.parameters():
        if not torch.all(torch.isfinite(w)):
            raise DivergenceError(cfg.epochs, float('nan'))
    return module.to_model(loss_history=history)


@REGRESSORS.register_module()
class JointRegressor(object):
    """Joint multi-output regressor (hidden layer + linear outputs).

    Keyword arguments are the fields of :obj:`TrainConfig`.
    """
    kind = 'joint'
    arguments = TrainConfig

    def __init__(self, **kwargs):
        self.train_cfg = TrainConfig(**kwargs)

    def fit(self, X, Y, logger=None):
        return train_joint(X, Y, self.train_cfg, logger=logger)

    def __repr__(self):
        return f'{self.__class__.__name__}({self.train_cfg})'


def mse(model, X, Y):
    """Mean squared error of ``model`` on (X, Y)."""
    return float(np.mean((model.predict(X) - np.asarray(Y))**2))
