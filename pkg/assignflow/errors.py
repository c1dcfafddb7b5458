# -*- coding: utf-8 -*-
#
#   Exceptions raised by assignflow for conditions with a dedicated CLI exit code
#

__all__ = [
    'NonFiniteError',
    'DimensionError',
    'DenseBudgetError',
    'CheckpointError',
    'RejectionError',
]


class NonFiniteError(ArithmeticError):
    """ A loss, gradient or integrated state contains NaN or infinite values.

    Args:
        message (str): Description of the failure
        index (int, optional): Offending tuple index within a batch; Default **None**
        step (int, optional): Offending optimizer or integration step; Default **None**
    """

    def __init__(self, message, index=None, step=None):
        super().__init__(message)
        self.index = index
        self.step = step


class DimensionError(ValueError):
    """ Dimensions (n, c or N) of two objects do not agree. """


class DenseBudgetError(ValueError):
    """ The number of configurations ``c**n`` exceeds the dense budget. """


class CheckpointError(ValueError):
    """ A checkpoint file is malformed or was written by an incompatible version. """


class RejectionError(RuntimeError):
    """ Rejection sampling exceeded its retry cap. """
