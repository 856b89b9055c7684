from .builder import REGRESSORS, build_regressor
from .gradient_check import (analytic_gradients, gradient_check,
                             regression_loss_value)
from .independent_regressor import (IndependentRegressor, LinearSVRRegressor,
                                    train_independent, train_linear_svr)
from .joint_regressor import (JointRegressor, TrainConfig, WordSpaceHead,
                              mse, train_joint)
from .regression_model import (RegressionModel, build_targets, load_model,
                               predict, save_model)

__all__ = [
    'REGRESSORS', 'build_regressor', 'RegressionModel', 'predict',
    'save_model', 'load_model', 'build_targets', 'TrainConfig',
    'WordSpaceHead', 'train_joint', 'JointRegressor', 'train_independent',
    'train_linear_svr', 'IndependentRegressor', 'LinearSVRRegressor',
    'gradient_check', 'analytic_gradients', 'regression_loss_value', 'mse'
]
