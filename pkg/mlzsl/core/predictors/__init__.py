from .builder import PREDICTORS, build_predictor
from .dmp import DMP, dmp_predict
from .exdap import ExDAP, exdap_predict
from .knn_graph import KnnGraph, build_knn_graph
from .result import METHODS, PredictionResult, binarize, rank_labels
from .self_training import self_train_prototypes
from .tramp import TraMP, propagate_iterative, tramp_predict

__all__ = [
    'PREDICTORS', 'build_predictor', 'PredictionResult', 'METHODS',
    'rank_labels', 'binarize', 'exdap_predict', 'ExDAP', 'dmp_predict', 'DMP',
    'KnnGraph', 'build_knn_graph', 'tramp_predict', 'propagate_iterative',
    'TraMP', 'self_train_prototypes'
]
