_base_ = ['../_base_/datasets/synth_5label.py']

methods = [
    'independent+exdap', 'independent+dmp', 'joint+exdap', 'joint+dmp',
    'joint+tramp'
]
selftrain = ['on']
seeds = [0, 1, 2, 3, 4]
regressors = dict(
    joint=dict(type='JointRegressor', hidden_units=1024, epochs=200),
    independent=dict(type='IndependentRegressor', l2_penalty=1e-4),
    svr=dict(type='LinearSVRRegressor', C=10.0))
predictors = dict(
    exdap=dict(type='ExDAP'),
    dmp=dict(type='DMP'),
    tramp=dict(type='TraMP', k=10))
k_selftrain = 5
nproc = 1
work_dir = './work_dirs/competitors_5label'
