import numpy as np
import pytest
import torch

from mlzsl.models import (IndependentRegressor, JointRegressor,
                          RegressionModel, TrainConfig, WordSpaceHead,
                          analytic_gradients, build_regressor, build_targets,
                          gradient_check, load_model, mse, save_model,
                          train_independent, train_joint, train_linear_svr)
from mlzsl.utils import DivergenceError, SolverError, ValidationError


def _random_joint(seed, in_features=3, hidden=4, out_features=2):
    rng = np.random.default_rng(seed)
    return RegressionModel(
        'joint',
        W1=rng.standard_normal((in_features, hidden)),
        b1=rng.standard_normal(hidden),
        W2=rng.standard_normal((hidden, out_features)),
        b2=rng.standard_normal(out_features))


def test_ridge_hand_fixture():
    X = np.array([[1.0], [2.0], [3.0]])
    Y = np.array([[1.0], [2.0], [2.0]])
    model = train_independent(X, Y, l2_penalty=1.0)
    assert model.kind == 'independent'
    np.testing.assert_allclose(model.b2, [1.0], atol=1e-10)
    np.testing.assert_allclose(model.W2, [[1 / 3]], atol=1e-10)


def test_ridge_exact_recovery():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((30, 4))
    W = rng.standard_normal((4, 3))
    model = train_independent(X, X @ W, l2_penalty=0.0)
    np.testing.assert_allclose(model.W2, W, atol=1e-8)
    np.testing.assert_allclose(model.b2, np.zeros(3), atol=1e-8)


def test_ridge_singular_without_penalty():
    x = np.arange(6, dtype=np.float64)[:, None]
    X = np.hstack([x, 2 * x])
    with pytest.raises(SolverError, match='positive l2_penalty'):
        train_independent(X, np.ones((6, 2)), l2_penalty=0.0)
    # the penalty makes the same system solvable
    train_independent(X, np.ones((6, 2)), l2_penalty=1e-3)


def test_ridge_large_penalty_keeps_intercept():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((40, 3))
    Y = rng.standard_normal((40, 2)) + [2.0, -1.0]
    model = train_independent(X, Y, l2_penalty=1e12)
    np.testing.assert_allclose(model.W2, 0.0, atol=1e-6)
    np.testing.assert_allclose(model.b2, Y.mean(axis=0), atol=1e-6)
    with pytest.raises(ValidationError):
        train_independent(X, Y, l2_penalty=-1.0)


def test_linear_svr_fits_linear_data():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((80, 3))
    Y = X @ rng.standard_normal((3, 2)) + 0.5
    model = train_linear_svr(X, Y, C=10.0, max_iter=20000, seed=0)
    assert model.W2.shape == (3, 2)
    assert mse(model, X, Y) < 5e-2


def test_zero_model_predicts_zero():
    model = RegressionModel(
        'joint',
        W1=np.zeros((3, 4)),
        b1=np.zeros(4),
        W2=np.zeros((4, 2)),
        b2=np.zeros(2))
    np.testing.assert_array_equal(model.predict(np.ones((5, 3))), 0.0)


def test_relu_clamps_negative_input():
    rng = np.random.default_rng(3)
    model = RegressionModel(
        'joint',
        W1=np.eye(2),
        b1=np.zeros(2),
        W2=rng.standard_normal((2, 3)),
        b2=[0.5, -0.5, 2.0])
    np.testing.assert_array_equal(
        model.predict([[-1.0, -2.0]]), [[0.5, -0.5, 2.0]])


def test_predict_width_mismatch():
    model = _random_joint(0)
    with pytest.raises(ValidationError, match='feature width 2'):
        model.predict(np.ones((1, 2)))


def test_predict_matches_torch_forward():
    module = WordSpaceHead(5, 3, hidden_units=8)
    module.init_weights(torch.Generator().manual_seed(0))
    with torch.no_grad():
        module.out.bias.normal_(generator=torch.Generator().manual_seed(1))
    model = module.to_model()
    X = np.random.default_rng(4).standard_normal((100, 5))
    with torch.no_grad():
        expected = module(torch.from_numpy(X)).numpy()
    np.testing.assert_allclose(model.predict(X), expected, atol=1e-12)


def test_build_targets_sums_label_vectors():
    V = np.array([[1.0, 2.0], [3.0, -1.0], [0.0, 1.0]])
    Y = build_targets([[1, 1, 1], [0, 1, 0]], V)
    np.testing.assert_array_equal(Y, [[4, 2], [3, -1]])
    with pytest.raises(ValidationError):
        build_targets([[1, 0]], V)


def test_train_joint_memorizes_one_point():
    X = np.array([[0.5, -0.2, 0.3]])
    Y = np.array([[0.4, -0.3]])
    cfg = TrainConfig(
        hidden_units=16,
        learning_rate=5e-3,
        epochs=2000,
        batch_size=1,
        l2_penalty=0.0,
        seed=0)
    model = train_joint(X, Y, cfg)
    assert len(model.loss_history) == 2000
    np.testing.assert_allclose(model.predict(X), Y, atol=1e-3)


def test_train_joint_is_deterministic():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((50, 4))
    Y = rng.standard_normal((50, 3))
    cfg = TrainConfig(hidden_units=16, epochs=5, batch_size=8, seed=11)
    first = train_joint(X, Y, cfg)
    second = train_joint(X, Y, cfg)
    for name, value in first.parameters().items():
        np.testing.assert_array_equal(value, second.parameters()[name])
    assert first.loss_history == second.loss_history

    other = train_joint(X, Y, TrainConfig(hidden_units=16, epochs=5, seed=12))
    assert not np.array_equal(first.W1, other.W1)


def test_full_batch_sgd_loss_never_increases():
    rng = np.random.default_rng(8)
    X = rng.standard_normal((40, 4))
    Y = np.tanh(X @ rng.standard_normal((4, 3)))
    cfg = TrainConfig(
        hidden_units=16,
        optimizer='SGD',
        momentum=0.0,
        learning_rate=1e-3,
        batch_size=40,
        epochs=200,
        l2_penalty=1e-4,
        activation='tanh',
        seed=2)
    model = train_joint(X, Y, cfg)
    assert len(model.loss_history) == 200
    assert np.all(np.diff(model.loss_history) <= 0)
    assert model.loss_history[-1] < model.loss_history[0]


def test_train_joint_divergence():
    rng = np.random.default_rng(6)
    X = 10 * rng.standard_normal((20, 3))
    Y = 10 * rng.standard_normal((20, 2))
    cfg = TrainConfig(
        hidden_units=8,
        learning_rate=1e10,
        epochs=50,
        batch_size=20,
        optimizer='SGD',
        momentum=0.0)
    with pytest.raises(DivergenceError, match='diverged at epoch'):
        train_joint(X, Y, cfg)


def test_train_joint_row_mismatch():
    with pytest.raises(ValidationError, match='row mismatch'):
        train_joint(np.ones((3, 2)), np.ones((4, 2)))


@pytest.mark.parametrize('kwargs', [
    dict(hidden_units=0),
    dict(learning_rate=0.0),
    dict(optimizer='RMSprop'),
    dict(activation='sigmoid'),
    dict(momentum=1.0),
])
def test_train_config_rejects(kwargs):
    with pytest.raises(ValidationError):
        TrainConfig(**kwargs)


def test_registry_builds_regressors():
    joint = build_regressor(dict(type='JointRegressor', hidden_units=8))
    assert isinstance(joint, JointRegressor)
    assert joint.train_cfg.hidden_units == 8
    ridge = build_regressor(dict(type='IndependentRegressor', l2_penalty=0.5))
    assert isinstance(ridge, IndependentRegressor)
    with pytest.raises(TypeError):
        build_regressor(dict(type='JointRegressor', depth=3))


@pytest.mark.parametrize('seed', range(10))
def test_gradient_check_joint(seed):
    model = _random_joint(seed)
    rng = np.random.default_rng(100 + seed)
    X = rng.standard_normal((5, 3))
    Y = rng.standard_normal((5, 2))
    assert gradient_check(model, X, Y, epsilon=1e-5) < 1e-4
    assert gradient_check(model, X, Y, epsilon=1e-5, l2_penalty=0.1) < 1e-4


def test_gradient_check_linear_model():
    rng = np.random.default_rng(9)
    model = RegressionModel(
        'independent',
        W2=rng.standard_normal((3, 2)),
        b2=rng.standard_normal(2))
    X = rng.standard_normal((6, 3))
    Y = rng.standard_normal((6, 2))
    assert gradient_check(model, X, Y, epsilon=1e-4) < 1e-7


def test_gradient_check_catches_corrupted_gradient():
    model = _random_joint(0)
    rng = np.random.default_rng(10)
    X = rng.standard_normal((5, 3))
    Y = rng.standard_normal((5, 2))

    def corrupted(model, X, Y, l2_penalty):
        grads = analytic_gradients(model, X, Y, l2_penalty)
        return {k: 1.1 * v for k, v in grads.items()}

    assert gradient_check(model, X, Y, grad_fn=corrupted) > 1e-2


@pytest.mark.parametrize('suffix', ['.json', '.pth'])
def test_save_load_model(tmp_path, suffix):
    model = _random_joint(1)
    model.loss_history = [0.5, 0.25]
    path = str(tmp_path / f'model{suffix}')
    save_model(model, path, config_hash='abc', seed=3)
    loaded = load_model(path)
    assert loaded.kind == 'joint'
    assert loaded.loss_history == [0.5, 0.25]
    for name, value in model.parameters().items():
        np.testing.assert_array_equal(loaded.parameters()[name], value)


@pytest.mark.slow
def test_train_joint_fits_relu_network():
    rng = np.random.default_rng(12)
    X = rng.standard_normal((200, 5))
    A = rng.standard_normal((5, 8)) / np.sqrt(5)
    B = rng.standard_normal((8, 3)) / np.sqrt(8)
    Y = np.maximum(X @ A, 0) @ B
    cfg = TrainConfig(
        hidden_units=64,
        learning_rate=5e-3,
        epochs=3000,
        batch_size=200,
        l2_penalty=0.0,
        seed=0)
    model = train_joint(X, Y, cfg)
    assert mse(model, X, Y) < 1e-3


@pytest.mark.slow
def test_joint_and_independent_fit_linear_data():
    rng = np.random.default_rng(13)
    X = rng.standard_normal((200, 4))
    Y = X @ rng.standard_normal((4, 3)) + 0.2
    ridge = train_independent(X, Y, l2_penalty=0.0)
    assert mse(ridge, X, Y) < 1e-12
    cfg = TrainConfig(
        hidden_units=64,
        learning_rate=5e-3,
        epochs=3000,
        batch_size=200,
        l2_penalty=0.0,
        seed=0)
    assert mse(train_joint(X, Y, cfg), X, Y) < 1e-3
