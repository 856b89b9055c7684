import os.path as osp

import mmcv
import numpy as np
from terminaltables import AsciiTable

from mlzsl.core.predictors import PredictionResult, rank_labels
from mlzsl.utils.exceptions import ValidationError


def _check_pair(a, b, names=('prediction', 'truth')):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape != b.shape:
        raise ValidationError(
            f'{names[0]} {a.shape} and {names[1]} {b.shape} must be '
            'matrices of the same shape')
    return a, b


def hamming_loss(pred_binary, truth_binary):
    """Fraction of (instance, label) entries predicted wrongly."""
    pred, truth = _check_pair(pred_binary, truth_binary)
    return float(np.mean(pred.astype(bool) != truth.astype(bool)))


def micro_f1(pred_binary, truth_binary):
    """F1 of the pooled TP/FP/FN counts; 0 when there is nothing to count."""
    pred, truth = _check_pair(pred_binary, truth_binary)
    pred = pred.astype(bool)
    truth = truth.astype(bool)
    tp = int(np.sum(pred & truth))
    fp = int(np.sum(pred & ~truth))
    fn = int(np.sum(~pred & truth))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def ranking_eligible(truth_binary):
    """Instances with at least one positive and one negative label."""
    truth = np.asarray(truth_binary).astype(bool)
    return truth.any(axis=1) & ~truth.all(axis=1)


def _eligible_rows(scores, truth_binary):
    scores, truth = _check_pair(scores, truth_binary, ('scores', 'truth'))
    scores = scores.astype(np.float64)
    if not np.all(np.isfinite(scores)):
        raise ValidationError('scores contain non-finite entries')
    eligible = ranking_eligible(truth)
    if not eligible.any():
        raise ValidationError(
            'no instance has both a positive and a negative label; ranking '
            'metrics are undefined')
    return scores, truth.astype(bool), eligible


def ranking_loss(scores, truth_binary):
    """Mean fraction of (positive, negative) label pairs ordered wrongly.

    A pair scored equally counts as half wrong. Instances without both a
    positive and a negative label are skipped.
    """
    scores, truth, eligible = _eligible_rows(scores, truth_binary)
    losses = []
    for s, t in zip(scores[eligible], truth[eligible]):
        pos = s[t][:, None]
        neg = s[~t][None, :]
        wrong = (pos < neg).sum() + 0.5 * (pos == neg).sum()
        losses.append(wrong / (pos.size * neg.size))
    return float(np.mean(losses))


def average_precision(scores, truth_binary):
    """Label-ranking average precision.

    For every positive label, the fraction of positives ranked at or above
    it; ranks come from :func:`rank_labels` (ties by label index).
    Instances without both a positive and a negative label are skipped.
    """
    scores, truth, eligible = _eligible_rows(scores, truth_binary)
    order = rank_labels(scores[eligible])
    precisions = []
    for perm, t in zip(order, truth[eligible]):
        hits = t[perm]
        ranks = np.flatnonzero(hits) + 1
        precisions.append(np.mean(np.arange(1, len(ranks) + 1) / ranks))
    return float(np.mean(precisions))


class EvalReport(object):
    """The four multi-label criteria of one prediction run.

    ``1 - micro_f1`` and ``1 - average_precision`` are reported alongside so
    that smaller is better for every column.
    """
    FIELDS = ('hamming_loss', 'micro_f1', 'ranking_loss', 'average_precision')

    def __init__(self,
                 hamming_loss,
                 micro_f1,
                 ranking_loss,
                 average_precision,
                 n_instances,
                 m_labels,
                 n_ranking_skipped=0):
        for name, value in zip(self.FIELDS, (hamming_loss, micro_f1,
                                             ranking_loss, average_precision)):
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f'{name}={value} is outside [0, 1]')
        self.hamming_loss = float(hamming_loss)
        self.micro_f1 = float(micro_f1)
        self.ranking_loss = float(ranking_loss)
        self.average_precision = float(average_precision)
        self.n_instances = int(n_instances)
        self.m_labels = int(m_labels)
        self.n_ranking_skipped = int(n_ranking_skipped)

    @property
    def complements(self):
        return 1.0 - self.micro_f1, 1.0 - self.average_precision

    def to_dict(self):
        one_minus_f1, one_minus_ap = self.complements
        return dict(
            hamming_loss=self.hamming_loss,
            micro_f1=self.micro_f1,
            one_minus_micro_f1=one_minus_f1,
            ranking_loss=self.ranking_loss,
            average_precision=self.average_precision,
            one_minus_average_precision=one_minus_ap,
            n_instances=self.n_instances,
            m_labels=self.m_labels,
            n_ranking_skipped=self.n_ranking_skipped)

    def table(self, title=None):
        """Aligned plain-text table of the report."""
        one_minus_f1, one_minus_ap = self.complements
        rows = [['metric', 'value', '1 - value'],
                ['Hamming loss', f'{self.hamming_loss:.4f}', ''],
                ['MicroF1', f'{self.micro_f1:.4f}', f'{one_minus_f1:.4f}'],
                ['Ranking loss', f'{self.ranking_loss:.4f}', ''],
                [
                    'Average precision', f'{self.average_precision:.4f}',
                    f'{one_minus_ap:.4f}'
                ]]
        table = AsciiTable(rows, title)
        table.inner_footing_row_border = False
        footer = (f'instances: {self.n_instances}  labels: {self.m_labels}  '
                  f'skipped for ranking: {self.n_ranking_skipped}')
        return table.table + '\n' + footer

    def dump(self, path, **meta):
        """Write the report (plus ``meta`` keys) as JSON."""
        mmcv.mkdir_or_exist(osp.dirname(osp.abspath(path)))
        obj = dict(meta)
        obj.update(self.to_dict())
        mmcv.dump(obj, path, file_format='json', indent=2, sort_keys=True)

    def __repr__(self):
        return (f'{self.__class__.__name__}(hamming_loss='
                f'{self.hamming_loss:.4f}, micro_f1={self.micro_f1:.4f}, '
                f'ranking_loss={self.ranking_loss:.4f}, '
                f'average_precision={self.average_precision:.4f})')


def evaluate(result, truth_binary, binary=None):
    """Compute all four criteria.

    Args:
        result (:obj:`PredictionResult` | ndarray): Prediction, or a score
            matrix (then ``binary`` must be given).
        truth_binary (ndarray): Ground truth, shape (n, m).
        binary (ndarray, optional): Binary prediction when ``result`` holds
            raw scores.

    Returns:
        :obj:`EvalReport`
    """
    if isinstance(result, PredictionResult):
        scores, binary = result.scores, result.binary
    else:
        if binary is None:
            raise ValidationError('binary predictions are required with raw '
                                  'scores')
        scores = result
    binary, truth = _check_pair(binary, truth_binary)
    _check_pair(scores, truth, ('scores', 'truth'))
    eligible = ranking_eligible(truth)
    return EvalReport(
        hamming_loss(binary, truth),
        micro_f1(binary, truth),
        ranking_loss(scores, truth),
        average_precision(scores, truth),
        n_instances=truth.shape[0],
        m_labels=truth.shape[1],
        n_ranking_skipped=int((~eligible).sum()))
