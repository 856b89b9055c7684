import copy

from mlzsl.core.predictors import build_predictor, self_train_prototypes
from mlzsl.core.wordspace import build_power_set
from mlzsl.utils import get_root_logger


def predict_labels(model,
                   target,
                   table,
                   predictor_cfg,
                   selftrain_k=None,
                   metric='cosine',
                   logger=None):
    """Project target features into the word space and label them.

    Args:
        model (:obj:`RegressionModel`): Trained regressor.
        target (:obj:`MultiLabelDataset`): Test split; only its features
            and vocabulary are used.
        table (:obj:`EmbeddingTable`): Word vectors covering the target
            vocabulary.
        predictor_cfg (dict): ``dict(type=...)`` of a registered predictor.
        selftrain_k (int, optional): Refine the prototypes with this many
            nearest predictions before prediction. ``None`` disables it.
            exDAP does not use prototypes and ignores it.
        metric (str): Distance of the self-training step.

    Returns:
        tuple: ``(Y_hat, prototypes, result)``; ``prototypes`` is None for
        exDAP.
    """
    logger = logger or get_root_logger()
    target.check_vocabulary(table)
    predictor = build_predictor(copy.deepcopy(predictor_cfg))
    Y_hat = model.predict(target.features)
    prototypes = None
    # exDAP decodes labels directly and needs no prototypes
    if predictor.name != 'exdap':
        prototypes = build_power_set(table, target.vocabulary)
        if selftrain_k is not None:
            prototypes = self_train_prototypes(
                prototypes, Y_hat, selftrain_k, metric=metric, logger=logger)
            logger.info(f'self-training moved {len(prototypes)} prototypes '
                        f'(k={selftrain_k})')
    result = predictor.predict(
        Y_hat,
        prototypes,
        label_embeddings=table.matrix(target.vocabulary),
        logger=logger)
    if result.flagged:
        logger.warning(f'{len(result.flagged)} instance(s) got no label: '
                       'their predicted word vector is zero')
    return Y_hat, prototypes, result
