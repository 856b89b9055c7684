import hashlib
import os
import random

import numpy as np
import torch

from .exceptions import ValidationError

THREADS_ENV = 'ZSML_THREADS'


def derive_seed(seed, name):
    """Derive a per-module sub-seed from the experiment seed.

    The first 4 bytes of ``sha256(f'{seed}:{name}')`` read as an unsigned
    big-endian integer, so every module can be rerun in isolation.
    """
    digest = hashlib.sha256(f'{seed}:{name}'.encode('utf-8')).digest()
    return int.from_bytes(digest[:4], 'big')


def set_random_seed(seed, deterministic=True):
    """Set random seed of python, numpy and torch."""
    random.seed(seed)
    np.random.seed(seed % 2**32)
    torch.manual_seed(seed)
    if deterministic:
        torch.use_deterministic_algorithms(True, warn_only=True)


def get_num_threads(default=None):
    """Parallelism cap from ``ZSML_THREADS``; ``default`` when unset."""
    value = os.environ.get(THREADS_ENV)
    if value is None or value.strip() == '':
        return default
    try:
        num = int(value)
    except ValueError:
        raise ValidationError(f'{THREADS_ENV} must be a positive integer, '
                              f'got {value!r}')
    if num < 1:
        raise ValidationError(f'{THREADS_ENV} must be a positive integer, '
                              f'got {value!r}')
    return num


def setup_threads():
    """Apply the ``ZSML_THREADS`` cap to torch; returns the cap or None."""
    num = get_num_threads()
    if num is not None:
        torch.set_num_threads(num)
    return num
