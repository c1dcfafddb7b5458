# -*- coding: utf-8 -*-
#
#   Linear fitness field
#

from collections import OrderedDict
import torch
import torch.nn as nn

import assignflow.network as afn

__all__ = ['LinearField']


class LinearField(afn.module.FitnessField):
    """ Linear fitness function :math:`F_\\theta(W) = A \\, vec(W) (+ b)`.

    This is the field used for coupled binary variables.
    The weight starts at zero, so an untrained field generates a stationary flow.

    Args:
        n (int): Number of variables
        c (int): Number of categories
        bias (bool, optional): Whether to add a bias term; Default **False**

    Example:
        >>> field = af.models.LinearField(2, 2)
        >>> W = torch.full((2, 2), 0.5, dtype=torch.double)
        >>> field(W).detach()
        tensor([[0., 0.],
                [0., 0.]], dtype=torch.float64)
    """

    variant = 'linear'

    def __init__(self, n, c, bias=False):
        super().__init__(n, c)
        self.bias = bias
        self.layers = nn.Sequential(
            OrderedDict([('1_linear', nn.Linear(n * c, n * c, bias=bias).double())])
        )
        self.reset_parameters()

    def reset_parameters(self, generator=None):
        """ Zero initialization, which is deterministic and needs no generator. """
        with torch.no_grad():
            for param in self.parameters():
                param.zero_()

    def header(self):
        return dict(super().header(), bias=int(self.bias))

    @classmethod
    def _from_header(cls, header):
        return cls(int(header['n']), int(header['c']), bias=bool(int(header.get('bias', 0))))
