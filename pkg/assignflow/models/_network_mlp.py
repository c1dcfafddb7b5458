# -*- coding: utf-8 -*-
#
#   Multilayer perceptron fitness field
#

import math
from collections import OrderedDict
import torch
import torch.nn as nn

import assignflow.network as afn

__all__ = ['MLPField']


class MLPField(afn.module.FitnessField):
    """ Multilayer perceptron fitness function with ReLU activations and no normalization layers.

    Args:
        n (int): Number of variables
        c (int): Number of categories
        hidden (tuple of int, optional): Hidden layer sizes; Default **(256, 256)**
        generator (torch.Generator, optional): Generator for the He-uniform initialization; Default **None**

    Example:
        >>> field = af.models.MLPField(2, 3, hidden=(16, 16))
        >>> field.layer_sizes
        [6, 16, 16, 6]
    """

    variant = 'mlp'

    def __init__(self, n, c, hidden=(256, 256), generator=None):
        super().__init__(n, c)
        self.hidden = tuple(int(h) for h in hidden)
        if any(h < 1 for h in self.hidden):
            raise ValueError(f'Hidden layer sizes should be positive [{self.hidden}]')

        sizes = [n * c, *self.hidden, n * c]
        layer_list = []
        for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
            layer_list.append((f'{2*i+1}_linear', nn.Linear(fan_in, fan_out).double()))
            if i < len(sizes) - 2:
                layer_list.append((f'{2*i+2}_relu', nn.ReLU()))
        self.layers = nn.Sequential(OrderedDict(layer_list))
        self.reset_parameters(generator)

    def reset_parameters(self, generator=None):
        """ He-uniform weights (variance ``2/fan_in``) and zero biases. """
        gain = nn.init.calculate_gain('relu')
        with torch.no_grad():
            for module in self.layers:
                if isinstance(module, nn.Linear):
                    bound = gain * math.sqrt(3.0 / module.in_features)
                    module.weight.uniform_(-bound, bound, generator=generator)
                    module.bias.zero_()

    @classmethod
    def _from_header(cls, header):
        sizes = [int(s) for s in header['layers'].split(',')]
        return cls(int(header['n']), int(header['c']), hidden=sizes[1:-1])
