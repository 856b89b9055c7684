from .embedding import (EmbeddingTable, cosine_distance,
                        cosine_distance_matrix, load_embeddings,
                        pairwise_distances, save_embeddings)
from .prototypes import (MAX_POWER_SET_LABELS, LabelSet, PrototypeSet,
                         build_power_set, synthesize_prototype)

__all__ = [
    'EmbeddingTable', 'load_embeddings', 'save_embeddings', 'cosine_distance',
    'cosine_distance_matrix', 'pairwise_distances', 'LabelSet',
    'PrototypeSet', 'synthesize_prototype', 'build_power_set',
    'MAX_POWER_SET_LABELS'
]
