# eight target labels, about 30% multi-label instances; the source pools
# two auxiliary label groups (8 + 8 labels) spanning the rank-12 label
# subspace
synth = dict(
    dim=48,
    rank=12,
    m_S=16,
    m_T=8,
    n_S=1200,
    n_T=500,
    feature_dim=96,
    multilabel_rate=0.3,
    source_multilabel_rate=0.12,
    max_labels=3,
    correlation=0.6,
    noise_sigma=0.3,
    shift=0.2,
    g='relu',
    relu_bend=0.5,
    seed=0)
