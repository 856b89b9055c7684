from .evaluation import *  # noqa: F401, F403
from .predictors import *  # noqa: F401, F403
from .wordspace import *  # noqa: F401, F403
