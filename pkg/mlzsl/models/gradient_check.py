import numpy as np
import torch

from .regression_model import check_pair


def _torch_loss(params, X, Y, kind, activation, l2_penalty):
    h = X
    if kind == 'joint':
        h = h @ params['W1'] + params['b1']
        h = torch.relu(h) if activation == 'relu' else torch.tanh(h)
    pred = h @ params['W2'] + params['b2']
    loss = torch.mean((pred - Y)**2)
    if l2_penalty > 0:
        loss = loss + l2_penalty * sum(
            torch.sum(v**2) for k, v in params.items() if k.startswith('W'))
    return loss


def regression_loss_value(model, X, Y, l2_penalty=0.0):
    """Training objective of :func:`train_joint` evaluated at ``model``."""
    X, Y = check_pair(X, Y)
    params = {k: torch.from_numpy(v.copy())
              for k, v in model.parameters().items()}
    with torch.no_grad():
        return _torch_loss(params, torch.from_numpy(X), torch.from_numpy(Y),
                           model.kind, model.activation, l2_penalty).item()


def analytic_gradients(model, X, Y, l2_penalty=0.0):
    """Gradients of the training objective w.r.t. every parameter, by
    reverse-mode differentiation.

    Returns:
        dict[str, ndarray]: Same keys and shapes as ``model.parameters()``.
    """
    X, Y = check_pair(X, Y)
    params = {
        k: torch.tensor(v, dtype=torch.float64, requires_grad=True)
        for k, v in model.parameters().items()
    }
    loss = _torch_loss(params, torch.from_numpy(X), torch.from_numpy(Y),
                       model.kind, model.activation, l2_penalty)
    grads = torch.autograd.grad(loss, list(params.values()))
    return {k: g.numpy() for k, g in zip(params, grads)}


def gradient_check(model,
                   X,
                   Y,
                   epsilon=1e-5,
                   l2_penalty=0.0,
                   grad_fn=None,
                   floor=1e-6):
    """Compare analytic gradients with central finite differences.

    Args:
        model (:obj:`RegressionModel`): Point at which to check.
        X (ndarray): Small feature matrix (a handful of rows).
        Y (ndarray): Matching targets.
        epsilon (float): Finite-difference step.
        l2_penalty (float): Weight penalty of the objective.
        grad_fn (callable, optional): ``grad_fn(model, X, Y, l2_penalty)``
            returning gradients to check. Defaults to
            :func:`analytic_gradients`.
        floor (float): Lower bound of the relative-error denominator.

    Returns:
        float: Worst ``|a - n| / max(|a|, |n|, floor)`` over all entries.
    """
    X, Y = check_pair(X, Y)
    grad_fn = grad_fn or analytic_gradients
    analytic = grad_fn(model, X, Y, l2_penalty)
    params = model.parameters()

    worst = 0.0
    for name, value in params.items():
        grad = np.asarray(analytic[name], dtype=np.float64)
        assert grad.shape == value.shape, \
            f'gradient of {name} has shape {grad.shape}, ' \
            f'expected {value.shape}'
        flat = value.ravel()
        for i in range(flat.size):
            plus = flat.copy()
            minus = flat.copy()
            plus[i] += epsilon
            minus[i] -= epsilon
            loss_plus = regression_loss_value(
                model.replace(**{name: plus.reshape(value.shape)}), X, Y,
                l2_penalty)
            loss_minus = regression_loss_value(
                model.replace(**{name: minus.reshape(value.shape)}), X, Y,
                l2_penalty)
            numeric = (loss_plus - loss_minus) / (2 * epsilon)
            a = grad.ravel()[i]
            err = abs(a - numeric) / max(abs(a), abs(numeric), floor)
            worst = max(worst, err)
    return worst
