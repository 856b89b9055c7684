# Copyright (c) OpenMMLab. All rights reserved.
import mmcv
from mmcv.utils import digit_version

from .version import __version__, short_version

MMCV_MIN = '1.3.15'
MMCV_MAX = '1.7.2'

assert digit_version(MMCV_MIN) <= digit_version(mmcv.__version__) <= \
    digit_version(MMCV_MAX), \
    f'MMCV=={mmcv.__version__} is used but incompatible. ' \
    f'Please install mmcv>={MMCV_MIN}, <={MMCV_MAX}.'

__all__ = ['__version__', 'short_version']
