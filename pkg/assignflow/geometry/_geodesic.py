# -*- coding: utf-8 -*-
#
#   e-geodesics on the assignment manifold
#

import torch
from ._simplex import exp_e, log_e, replicator

__all__ = ['geodesic_point', 'geodesic_point_at', 'geodesic_velocity']


def _as_time(t, like):
    t = torch.as_tensor(t, dtype=like.dtype, device=like.device)
    if (t < 0).any() or (t > 1).any():
        raise ValueError('Geodesic time should lie in [0, 1]')
    # Broadcast per-batch times over the (n, c) axes
    return t.reshape(t.shape + (1, 1)) if t.dim() > 0 else t


def geodesic_point(u0, u_target, t):
    """ Point on the e-geodesic from ``exp_e(1_W, u0)`` to ``exp_e(1_W, u_target)``.

    In barycenter tangent coordinates an e-geodesic is a straight line,
    so the point at time ``t`` is ``exp_e(1_W, u0 + t (u_target - u0))``.

    Args:
        u0 (torch.Tensor): Start tangent matrix(es) ``(..., n, c)``
        u_target (torch.Tensor): End tangent matrix(es) ``(..., n, c)``
        t (float or torch.Tensor): Time in [0, 1], either a scalar or one value per batch element

    Return:
        torch.Tensor: Assignment state(s) ``(..., n, c)``
    """
    t = _as_time(t, u0)
    bary = torch.full_like(u0, 1.0 / u0.shape[-1])
    return exp_e(bary, u0 + t * (u_target - u0))


def geodesic_point_at(W0, q, t):
    """ Base-point form ``exp_e(W0, t log_e(W0, q))`` of the same e-geodesic.

    This coincides with :func:`geodesic_point` when ``W0`` and ``q`` are the images of ``u0`` and ``u_target``.
    """
    t = _as_time(t, W0)
    return exp_e(W0, t * log_e(W0, q))


def geodesic_velocity(W_t, u0, u_target):
    """ Velocity ``R_{W_t}[u_target - u0]`` of the e-geodesic at the point ``W_t``. """
    return replicator(W_t, u_target - u0)
