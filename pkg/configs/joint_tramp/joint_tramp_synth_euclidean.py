_base_ = ['./joint_tramp_synth.py']

metric = 'euclidean'
work_dir = './work_dirs/joint_tramp_synth_euclidean'
