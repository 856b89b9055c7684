from .multilabel import (MultiLabelDataset, align_rows, check_disjoint,
                         dump_label_csv, dump_score_csv, dump_vector_csv,
                         load_dataset, load_label_csv, read_table,
                         save_dataset)
from .synth import (SynthConfig, SynthDataset, check_coupling,
                    draw_label_vectors, generate, random_coupling,
                    sample_label_sets)

__all__ = [
    'MultiLabelDataset', 'load_dataset', 'save_dataset', 'read_table',
    'load_label_csv', 'dump_label_csv', 'dump_score_csv', 'dump_vector_csv',
    'align_rows', 'check_disjoint', 'SynthConfig', 'SynthDataset',
    'generate', 'sample_label_sets', 'random_coupling', 'check_coupling',
    'draw_label_vectors'
]
