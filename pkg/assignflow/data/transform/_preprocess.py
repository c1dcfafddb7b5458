# -*- coding: utf-8 -*-
#
#   Training tuple construction for flow matching
#

import logging
from typing import NamedTuple
import torch
from ...geometry import barycenter, geodesic_point, log_e, project_tangent, smoothed_corner
from .util import BaseTransform

__all__ = ['TrainingTuple', 'sample_reference', 'make_training_tuple', 'GeodesicTuple']
log = logging.getLogger(__name__)


class TrainingTuple(NamedTuple):
    """ Point on a conditional e-geodesic, with the tangent endpoints of that geodesic.

    All fields carry the same leading batch dimensions.
    """

    t: torch.Tensor
    """ Geodesic time in [0, 1] ``(...)`` """
    u0: torch.Tensor
    """ Reference tangent matrix ``(..., n, c)`` """
    u_beta: torch.Tensor
    """ Tangent matrix of the smoothed corner ``(..., n, c)`` """
    W_t: torch.Tensor
    """ Assignment state ``geodesic_point(u0, u_beta, t)`` ``(..., n, c)`` """


def sample_reference(n, c, size=(), generator=None):
    """ Draw tangent matrices from the standard normal reference distribution on the tangent space.

    Every row is a standard normal vector of :math:`\\mathbb{R}^c`, projected onto the zero-sum subspace.
    In any orthonormal basis of that subspace this is an isotropic standard normal.

    Args:
        n (int): Number of variables
        c (int): Number of categories
        size (tuple, optional): Leading batch dimensions; Default **()**
        generator (torch.Generator, optional): Random generator; Default **None**

    Return:
        torch.Tensor: Tangent matrices ``(*size, n, c)``
    """
    size = tuple(size) if not isinstance(size, int) else (size,)
    z = torch.randn(size + (n, c), dtype=torch.double, generator=generator)
    return project_tangent(z)


def make_training_tuple(beta, c, eps=0.01, generator=None, t=None):
    """ Build training tuples for a batch of data configurations.

    Args:
        beta (torch.LongTensor): Data configuration(s) ``(..., n)``
        c (int): Number of categories
        eps (float, optional): Smoothing constant of the corners; Default **0.01**
        generator (torch.Generator, optional): Random generator for the times and reference samples; Default **None**
        t (float or torch.Tensor, optional): Fixed geodesic time instead of ``t ~ U[0, 1]``; Default **None**

    Return:
        TrainingTuple: Tuples with the leading dimensions of ``beta``
    """
    beta = torch.as_tensor(beta, dtype=torch.long)
    size = beta.shape[:-1]
    n = beta.shape[-1]

    if t is None:
        t = torch.rand(size, dtype=torch.double, generator=generator)
    else:
        t = torch.as_tensor(t, dtype=torch.double).expand(size).clone()

    u0 = sample_reference(n, c, size, generator)
    u_beta = log_e(barycenter(n, c), smoothed_corner(beta, c, eps))
    W_t = geodesic_point(u0, u_beta, t)

    return TrainingTuple(t, u0, u_beta, W_t)


class GeodesicTuple(BaseTransform):
    """ Transform that turns a batch of configurations into :class:`TrainingTuple` objects.

    Args:
        c (int): Number of categories
        eps (float, optional): Smoothing constant of the corners; Default **0.01**
        generator (torch.Generator, optional): Random generator; Default **None**
    """

    def __init__(self, c, eps=0.01, generator=None):
        super().__init__(c=c, eps=eps, generator=generator)

    @classmethod
    def apply(cls, data, c, eps=0.01, generator=None):
        return make_training_tuple(data, c, eps, generator)
