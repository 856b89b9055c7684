from .metrics import (EvalReport, average_precision, evaluate, hamming_loss,
                      micro_f1, ranking_eligible, ranking_loss)

__all__ = [
    'hamming_loss', 'micro_f1', 'ranking_loss', 'average_precision',
    'ranking_eligible', 'EvalReport', 'evaluate'
]
