_base_ = ['./competitors_5label.py']

synth = dict(shift=0.4)
methods = ['joint+dmp', 'joint+tramp']
selftrain = ['on', 'off']
work_dir = './work_dirs/selftrain_ablation'
