regressor = dict(
    type='JointRegressor',
    hidden_units=1024,
    learning_rate=1e-3,
    epochs=200,
    batch_size=64,
    l2_penalty=1e-4,
    optimizer='Adam',
    activation='relu',
    log_interval=50)
