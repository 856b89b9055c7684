regressor = dict(type='IndependentRegressor', l2_penalty=1e-4)
