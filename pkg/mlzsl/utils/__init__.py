from .config import (check_component, check_keys, component_arguments,
                     config_hash, config_to_dict, load_config, merge_defaults)
from .exceptions import (DivergenceError, EmbeddingError, ParseError,
                         PowerSetCapError, SolverError, ValidationError,
                         ZSLError)
from .logger import get_root_logger
from .seed import (THREADS_ENV, derive_seed, get_num_threads,
                   set_random_seed, setup_threads)

__all__ = [
    'get_root_logger', 'ZSLError', 'ValidationError', 'EmbeddingError',
    'PowerSetCapError', 'ParseError', 'DivergenceError', 'SolverError',
    'derive_seed', 'set_random_seed', 'get_num_threads', 'setup_threads',
    'THREADS_ENV', 'config_hash', 'config_to_dict', 'merge_defaults',
    'check_keys', 'check_component', 'component_arguments', 'load_config'
]
