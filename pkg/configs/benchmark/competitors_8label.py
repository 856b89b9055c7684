_base_ = ['../_base_/datasets/synth_8label.py']

methods = [
    'svr+exdap', 'independent+exdap', 'independent+dmp', 'joint+exdap',
    'joint+dmp', 'joint+tramp'
]
selftrain = ['on']
seeds = [0, 1, 2, 3, 4]
predictors = dict(tramp=dict(type='TraMP', k=10))
work_dir = './work_dirs/competitors_8label'
