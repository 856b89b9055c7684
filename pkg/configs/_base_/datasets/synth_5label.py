# five target labels, about 22% multi-label instances; every label vector
# lives in a rank-8 subspace spanned by the twelve source labels
synth = dict(
    dim=32,
    rank=8,
    m_S=12,
    m_T=5,
    n_S=1000,
    n_T=500,
    feature_dim=64,
    multilabel_rate=0.22,
    source_multilabel_rate=0.3,
    max_labels=3,
    correlation=0.6,
    noise_sigma=0.3,
    shift=0.2,
    g='relu',
    relu_bend=0.5,
    seed=0)
