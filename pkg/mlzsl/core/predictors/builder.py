from mmcv.utils import Registry, build_from_cfg

PREDICTORS = Registry('zero-shot predictor')


def build_predictor(cfg, default_args=None):
    """Build a zero-shot multi-label predictor from a ``dict(type=...)``."""
    return build_from_cfg(cfg, PREDICTORS, default_args)
