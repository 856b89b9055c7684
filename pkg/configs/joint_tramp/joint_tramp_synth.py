_base_ = [
    '../_base_/datasets/synth_files.py',
    '../_base_/schedules/joint_adam_200e.py', '../_base_/default_runtime.py'
]

predictor = dict(
    type='TraMP', k=10, sigma_mode='median_sq', prototype_neighbors='all')
work_dir = './work_dirs/joint_tramp_synth'
