_base_ = [
    '../_base_/datasets/synth_files.py', '../_base_/schedules/ridge.py',
    '../_base_/default_runtime.py'
]

predictor = dict(type='ExDAP', cond_warn=1e8)
# exDAP does not use prototypes
selftrain = dict(enable=False)
work_dir = './work_dirs/ridge_exdap_synth'
