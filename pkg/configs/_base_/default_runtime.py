seed = 0
log_level = 'INFO'
metric = 'cosine'
threshold = 0.5
selftrain = dict(enable=True, k=5)
