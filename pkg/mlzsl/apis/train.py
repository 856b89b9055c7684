import copy

from mlzsl.models import build_regressor, build_targets
from mlzsl.utils import get_root_logger


def train_regressor(regressor_cfg, source, table, logger=None):
    """Fit a regressor from source features to summed label vectors.

    Args:
        regressor_cfg (dict): ``dict(type=...)`` of a registered regressor.
        source (:obj:`MultiLabelDataset`): Training split.
        table (:obj:`EmbeddingTable`): Word vectors covering the source
            vocabulary.

    Returns:
        :obj:`RegressionModel`
    """
    logger = logger or get_root_logger()
    source.check_vocabulary(table)
    Y_S = build_targets(source.labels, table.matrix(source.vocabulary))
    regressor = build_regressor(copy.deepcopy(regressor_cfg))
    logger.info(f'training {regressor!r} on {len(source)} source instances')
    model = regressor.fit(source.features, Y_S, logger=logger)
    if model.loss_history:
        logger.info(f'final training loss {model.loss_history[-1]:.6f}')
    return model
