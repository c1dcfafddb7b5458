# -*- coding: utf-8 -*-
#
#   Rounding of assignment states to configurations
#

import logging
import torch
from .util import BaseTransform

__all__ = ['ArgmaxRounding', 'count_ties']
log = logging.getLogger(__name__)


def count_ties(W):
    """ Number of rows whose maximum is attained by more than one category. """
    top = W.max(-1, keepdim=True).values
    return int(((W == top).sum(-1) > 1).sum())


class ArgmaxRounding(BaseTransform):
    """ Round assignment states to configurations with a row-wise argmax.

    Ties resolve to the lowest category index.
    The number of tied rows of the last call is stored in ``ties`` and logged as a warning.

    Example:
        >>> W = torch.tensor([[0.7, 0.3], [0.5, 0.5]], dtype=torch.double)
        >>> rounding = af.data.transform.ArgmaxRounding()
        >>> rounding(W)
        tensor([0, 0])
        >>> rounding.ties
        1
    """

    def __init__(self):
        super().__init__()
        self.ties = 0

    def __call__(self, data):
        self.ties = count_ties(data)
        if self.ties:
            log.warning(f'{self.ties} rows had a tied maximum and were rounded to the lowest index')
        return self.apply(data)

    @classmethod
    def apply(cls, data):
        # First occurrence wins for equal maxima
        top = data.max(-1, keepdim=True).values
        hits = (data == top).long()
        return hits.argmax(-1)
