_base_ = ['./joint_dmp_synth.py']

selftrain = dict(enable=False)
work_dir = './work_dirs/joint_dmp_synth_noselftrain'
