# -*- coding: utf-8 -*-
#
#   Fitness field construction from a field specification
#

import logging
from ._network_linear import LinearField
from ._network_mlp import MLPField

__all__ = ['build_field']
log = logging.getLogger(__name__)


def build_field(variant, n, c, hidden=(256, 256), bias=False, generator=None):
    """ Create an initialized fitness field.

    Args:
        variant (str): ``'linear'`` or ``'mlp'``
        n (int): Number of variables
        c (int): Number of categories
        hidden (tuple of int, optional): Hidden layer sizes of the MLP variant; Default **(256, 256)**
        bias (bool, optional): Bias term of the linear variant; Default **False**
        generator (torch.Generator, optional): Generator used for the initialization; Default **None**
    """
    if variant == 'linear':
        field = LinearField(n, c, bias=bias)
    elif variant == 'mlp':
        field = MLPField(n, c, hidden=hidden, generator=generator)
    else:
        raise ValueError(f'Unknown field variant [{variant}], choose linear or mlp')

    log.debug(f'Built {variant} field with layers {field.layer_sizes}')
    return field
