# -*- coding: utf-8 -*-
#
#   Fisher-Rao geometry of the simplex and the assignment manifold
#

import logging
import torch

__all__ = [
    'POSITIVITY_FLOOR',
    'barycenter',
    'project_tangent',
    'replicator',
    'exp_e',
    'log_e',
    'exp_map',
    'fisher_norm_sq',
    'pushed_norm_sq',
    'smoothed_corner',
]
log = logging.getLogger(__name__)

POSITIVITY_FLOOR = 1e-14


def _check_finite(tensor, name):
    if not torch.isfinite(tensor).all():
        raise ValueError(f'{name} contains non-finite entries')


def _floor(p):
    """ Clamp simplex entries to the positivity floor and renormalize. """
    p = p.clamp_min(POSITIVITY_FLOOR)
    return p / p.sum(-1, keepdim=True)


def barycenter(n, c, dtype=torch.double, device=None):
    """ Barycenter of the assignment manifold, every row equal to ``1/c``.

    Args:
        n (int): Number of variables
        c (int): Number of categories (at least 2)

    Return:
        torch.Tensor: ``(n, c)`` assignment state
    """
    if n < 1 or c < 2:
        raise ValueError(f'Invalid dimensions n={n}, c={c} [need n >= 1, c >= 2]')
    return torch.full((n, c), 1.0 / c, dtype=dtype, device=device)


def project_tangent(x):
    """ Orthogonal projection onto the zero-sum tangent space, applied along the last axis. """
    return x - x.mean(-1, keepdim=True)


def replicator(p, f):
    """ Replicator map :math:`R_p f = Diag(p) f - \\langle p, f \\rangle p`.

    This is the inverse Fisher-Rao metric tensor in ambient coordinates.
    It annihilates vectors that are constant along the category axis.

    Args:
        p (torch.Tensor): Simplex point(s) ``(..., c)``
        f (torch.Tensor): Ambient vector(s), broadcastable to ``p``

    Return:
        torch.Tensor: Tangent vector(s) with zero row sums

    Example:
        >>> p = torch.tensor([0.25, 0.75], dtype=torch.double)
        >>> af.geometry.replicator(p, torch.tensor([4.0, 0.0], dtype=torch.double))
        tensor([ 0.7500, -0.7500], dtype=torch.float64)
    """
    _check_finite(p, 'p')
    _check_finite(f, 'f')
    pf = p * f
    return pf - pf.sum(-1, keepdim=True) * p


def exp_e(p, v):
    """ Exponential map of the e-connection composed with the replicator map, ie. :math:`Exp_p \\circ R_p`.

    The composition has the closed form :math:`p e^v / \\langle p, e^v \\rangle`, which is evaluated with max-subtraction.
    At the barycenter this is the softmax of ``v``.

    Args:
        p (torch.Tensor): Base point(s) ``(..., c)``
        v (torch.Tensor): Tangent vector(s) ``(..., c)``

    Return:
        torch.Tensor: Simplex point(s), clamped to :data:`POSITIVITY_FLOOR` and renormalized
    """
    _check_finite(v, 'v')
    z = v - v.max(-1, keepdim=True).values
    w = p * torch.exp(z)
    return _floor(w / w.sum(-1, keepdim=True))


def log_e(p, q):
    """ Inverse of :func:`exp_e`: the centered logarithmic ratio :math:`\\Pi_0 \\log(q/p)`.

    Args:
        p (torch.Tensor): Base point(s) ``(..., c)``
        q (torch.Tensor): Target point(s) ``(..., c)``

    Return:
        torch.Tensor: Tangent vector(s) ``v`` with ``exp_e(p, v) == q``
    """
    if (q < 0.5 * POSITIVITY_FLOOR).any() or (p < 0.5 * POSITIVITY_FLOOR).any():
        raise ValueError(f'Simplex entries below the positivity floor [{POSITIVITY_FLOOR}]')
    return project_tangent(torch.log(q) - torch.log(p))


def exp_map(p, v):
    """ Exponential map of the e-connection :math:`Exp_p(v) = p e^{v/p} / \\langle p, e^{v/p} \\rangle`.

    Note:
        The denominator uses the exponent ``v/p`` as well, which keeps
        ``exp_map(p, replicator(p, f)) == exp_e(p, f)``.
    """
    _check_finite(v, 'v')
    z = v / p
    z = z - z.max(-1, keepdim=True).values
    w = p * torch.exp(z)
    return _floor(w / w.sum(-1, keepdim=True))


def fisher_norm_sq(W, u):
    """ Squared Fisher-Rao norm :math:`\\sum_i \\langle u_i, u_i / W_i \\rangle` of a tangent matrix.

    Args:
        W (torch.Tensor): Assignment state(s) ``(..., n, c)``
        u (torch.Tensor): Tangent matrix(es) ``(..., n, c)``

    Return:
        torch.Tensor: Norms with shape ``(...)``
    """
    return (u * u / W).sum((-2, -1))


def pushed_norm_sq(W, a):
    """ Squared Fisher-Rao norm of ``R_W[a]`` without forming the tangent vector.

    Per row this is the variance of ``a_i`` under ``W_i``, evaluated in centered form,
    so the result is nonnegative and exactly zero for row-wise constant ``a``.

    Args:
        W (torch.Tensor): Assignment state(s) ``(..., n, c)``
        a (torch.Tensor): Ambient matrix(es) ``(..., n, c)``

    Return:
        torch.Tensor: Norms with shape ``(...)``
    """
    mean = (W * a).sum(-1, keepdim=True)
    return (W * (a - mean) ** 2).sum((-2, -1))


def smoothed_corner(beta, c, eps=0.01):
    """ Smoothed extreme point :math:`q_\\beta = \\epsilon 1_W + (1-\\epsilon) M e_\\beta`.

    Args:
        beta (torch.LongTensor): Configuration(s) ``(..., n)``
        c (int): Number of categories
        eps (float, optional): Smoothing constant in (0, 1); Default **0.01**

    Return:
        torch.Tensor: Assignment state(s) ``(..., n, c)``
    """
    if not 0 < eps < 1:
        raise ValueError(f'eps should be in the open interval (0, 1) [{eps}]')
    if (beta < 0).any() or (beta >= c).any():
        raise ValueError(f'Configuration labels out of range [0, {c})')
    onehot = torch.nn.functional.one_hot(beta.long(), c).double()
    return eps / c + (1 - eps) * onehot
