class ZSLError(Exception):
    """Base class of all data and validation errors raised by mlzsl."""


class ValidationError(ZSLError, ValueError):
    """An input violates a documented contract."""


class EmbeddingError(ValidationError):
    """Word-space problems: missing labels, zero vectors, bad dimensions."""


class PowerSetCapError(ValidationError):
    """Too many target labels to materialise every label combination."""


class ParseError(ZSLError, ValueError):
    """A text artifact could not be parsed.

    Args:
        msg (str): What went wrong.
        path (str, optional): The file being parsed.
        lineno (int, optional): 1-based line number of the offending line.
    """

    def __init__(self, msg, path=None, lineno=None):
        self.path = path
        self.lineno = lineno
        where = ''
        if path is not None:
            where += f'{path}'
        if lineno is not None:
            where += f':{lineno}' if where else f'line {lineno}'
        super(ParseError, self).__init__(f'{where}: {msg}' if where else msg)


class DivergenceError(ZSLError, RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch, loss):
        self.epoch = epoch
        self.loss = loss
        super(DivergenceError, self).__init__(
            f'training diverged at epoch {epoch} (loss={loss}); '
            'try a smaller learning_rate')


class SolverError(ZSLError, RuntimeError):
    """A linear system could not be solved."""
