from mmcv.utils import Registry, build_from_cfg

REGRESSORS = Registry('regressor')


def build_regressor(cfg, default_args=None):
    """Build a feature -> word-space regressor from a ``dict(type=...)``."""
    return build_from_cfg(cfg, REGRESSORS, default_args)
