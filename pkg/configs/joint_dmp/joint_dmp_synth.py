_base_ = [
    '../_base_/datasets/synth_files.py',
    '../_base_/schedules/joint_adam_200e.py', '../_base_/default_runtime.py'
]

predictor = dict(type='DMP')
work_dir = './work_dirs/joint_dmp_synth'
