# -*- coding: utf-8 -*-
#
#   Base fitness field module structure
#

import logging
import torch
import torch.nn as nn
from ...errors import CheckpointError, DimensionError
from ._checkpoint import CheckpointLoader, CheckpointSaver

__all__ = ['FitnessField']
log = logging.getLogger(__name__)


class FitnessField(nn.Module):
    """ This class provides an abstraction layer on top of :class:`pytorch:torch.nn.Module` and is the base for every fitness function
    :math:`F_\\theta: W \\to R^{n \\times c}` implemented in this framework.

    Subclasses define ``self.layers`` as a :class:`pytorch:torch.nn.Sequential` operating on flattened states of length ``n*c``
    and set the ``variant`` class attribute, which is used to rebuild the field from a checkpoint.

    Args:
        n (int): Number of variables
        c (int): Number of categories

    Note:
        The field is time independent and a pure per-sample function (no normalization layers),
        which the likelihood computation relies on when it evaluates divergences.
    """

    variant = None
    _variants = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.variant is not None:
            FitnessField._variants[cls.variant] = cls

    def __init__(self, n, c):
        super().__init__()
        if n < 1 or c < 2:
            raise ValueError(f'Invalid dimensions n={n}, c={c} [need n >= 1, c >= 2]')
        self.n = n
        self.c = c
        self.layers = None

    @property
    def layer_sizes(self):
        """ Sizes ``[nc, h1, ..., nc]`` of the linear layers in the field. """
        sizes = [self.n * self.c]
        for module in self.layers:
            if isinstance(module, nn.Linear):
                sizes.append(module.out_features)
        return sizes

    def _forward(self, x):
        return self.layers(x)

    def forward(self, W):
        """ Evaluate the fitness of assignment state(s).

        Args:
            W (torch.Tensor): Assignment state(s) ``(..., n, c)``

        Return:
            torch.Tensor: Fitness values ``(..., n, c)``
        """
        if W.shape[-2:] != (self.n, self.c):
            raise DimensionError(f'Expected states of shape (..., {self.n}, {self.c}), got {tuple(W.shape)}')
        lead = W.shape[:-2]
        out = self._forward(W.reshape(*lead, self.n * self.c))
        return out.reshape(*lead, self.n, self.c)

    def vjp(self, W, upstream):
        """ Reverse-mode gradients of ``<upstream, F(W)>`` with respect to the parameters and the input.

        Args:
            W (torch.Tensor): Assignment state(s) ``(..., n, c)``
            upstream (torch.Tensor): Upstream gradient with the same shape as the output

        Return:
            tuple: (tuple of parameter gradients in declaration order, input gradient)

        Note:
            This is a standalone gradient helper for the field alone and does not touch the ``.grad`` attributes.
            Training calls ``loss.backward()`` and the likelihood divergence differentiates the whole lifted flow
            (field, exponential map and replicator) with autograd, so neither goes through this method.
        """
        W = W.detach().requires_grad_(True)
        with torch.enable_grad():
            out = self(W)
            if upstream.shape != out.shape:
                raise DimensionError(f'Upstream gradient shape {tuple(upstream.shape)} does not match output {tuple(out.shape)}')
            params = tuple(self.parameters())
            grads = torch.autograd.grad(out, params + (W,), upstream, allow_unused=True)
        grads = tuple(torch.zeros_like(p) if g is None else g for p, g in zip(params + (W,), grads))
        return grads[:-1], grads[-1]

    def header(self):
        """ Checkpoint header entries describing this field. """
        return {
            'variant': self.variant,
            'n': self.n,
            'c': self.c,
            'layers': ','.join(str(s) for s in self.layer_sizes),
        }

    @classmethod
    def from_header(cls, header):
        """ Build an (uninitialized) field from checkpoint header entries. """
        variant = header.get('variant')
        if variant not in cls._variants:
            raise CheckpointError(f'Unknown field variant in checkpoint [{variant}]')
        try:
            return cls._variants[variant]._from_header(header)
        except CheckpointError:
            raise
        except KeyError as err:
            raise CheckpointError(f'Checkpoint header misses the {err} entry') from err
        except (ValueError, TypeError) as err:
            raise CheckpointError(f'Invalid {variant} field description in checkpoint header: {err}') from err

    @classmethod
    def _from_header(cls, header):
        raise NotImplementedError(f'{cls.__name__} cannot be rebuilt from a checkpoint header')

    def save_weights(self, filename, **extra):
        """ Save the field to a checkpoint file.

        Args:
            filename (str or path-like): Path of the checkpoint
            **extra (dict, optional): Additional header entries, eg. ``eps`` or integrator defaults

        Note:
            The file is written to a temporary file first and then renamed,
            so a crash never leaves a half-written checkpoint behind.
        """
        header = dict(self.header(), **extra)
        saver = CheckpointSaver(header)
        saver.save_module(self)
        saver.write_file(filename)

    @classmethod
    def load_checkpoint(cls, filename):
        """ Rebuild a field from a checkpoint file.

        Return:
            tuple: (field, header dictionary with string values)
        """
        loader = CheckpointLoader(filename)
        field = cls.from_header(loader.header)
        loader.load_module(field)
        field.eval()
        log.info(f'Loaded {field.variant} field from {filename}')
        return field, loader.header
