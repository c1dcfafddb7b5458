# -*- coding: utf-8 -*-
#
#   Embedding of the assignment manifold into the meta-simplex of joint distributions
#

import logging
import torch
from ..errors import DenseBudgetError, DimensionError

__all__ = [
    'DENSE_BUDGET',
    'num_configurations',
    'configuration_to_index',
    'index_to_configuration',
    'all_configurations',
    'embed',
    'marginalize',
    'entropy',
    'empirical_joint',
    'tv_distance',
]
log = logging.getLogger(__name__)

DENSE_BUDGET = 2 ** 24


def num_configurations(n, c, budget=DENSE_BUDGET):
    """ Number of configurations ``N = c**n``, guarded by the dense budget.

    Raises:
        DenseBudgetError: if ``c**n`` exceeds ``budget``
    """
    N = c ** n
    if N > budget:
        raise DenseBudgetError(f'Dense joint of {c}**{n} = {N} configurations exceeds the budget of {budget}')
    return N


def configuration_to_index(alpha, c):
    """ Flat row-major index of configuration(s), with the first variable most significant.

    Args:
        alpha (torch.LongTensor): Configuration(s) ``(..., n)``
        c (int): Number of categories

    Return:
        torch.LongTensor: Indices ``(...)``

    Example:
        >>> af.geometry.configuration_to_index(torch.tensor([1, 0]), 2)
        tensor(2)
    """
    n = alpha.shape[-1]
    if alpha.numel() and (alpha.min() < 0 or alpha.max() >= c):
        raise ValueError(f'Configuration labels out of range [0, {c})')
    weights = c ** torch.arange(n - 1, -1, -1, device=alpha.device)
    return (alpha.long() * weights).sum(-1)


def index_to_configuration(index, n, c):
    """ Inverse of :func:`configuration_to_index`. """
    index = torch.as_tensor(index, dtype=torch.long)
    weights = c ** torch.arange(n - 1, -1, -1, device=index.device)
    return (index.unsqueeze(-1) // weights) % c


def all_configurations(n, c):
    """ All ``c**n`` configurations in flat index order, as an ``(N, n)`` long tensor. """
    return index_to_configuration(torch.arange(num_configurations(n, c)), n, c)


def embed(W):
    """ Embedding :math:`T(W)_\\alpha = \\prod_i W_{i, \\alpha_i}` of an assignment state into the meta-simplex.

    Args:
        W (torch.Tensor): Assignment state ``(n, c)``

    Return:
        torch.Tensor: Joint distribution ``(c**n,)`` in row-major configuration order

    Example:
        >>> W = torch.tensor([[0.9, 0.1], [0.9, 0.1]], dtype=torch.double)
        >>> af.geometry.embed(W)
        tensor([0.8100, 0.0900, 0.0900, 0.0100], dtype=torch.float64)
    """
    n, c = W.shape
    num_configurations(n, c)
    p = W[0]
    for i in range(1, n):
        p = (p[:, None] * W[i][None, :]).reshape(-1)
    return p


def marginalize(p, n, c):
    """ Marginalization map :math:`(Mp)_{i,j} = \\sum_{\\alpha: \\alpha_i = j} p_\\alpha`.

    Args:
        p (torch.Tensor): Joint distribution ``(c**n,)``
        n (int): Number of variables
        c (int): Number of categories

    Return:
        torch.Tensor: ``(n, c)`` matrix of per-variable marginals
    """
    if p.numel() != c ** n:
        raise DimensionError(f'Joint has {p.numel()} entries, expected {c}**{n}')
    p = p.reshape((c,) * n)
    axes = tuple(range(n))
    return torch.stack([p.sum(tuple(a for a in axes if a != i)) if n > 1 else p for i in axes])


def entropy(p):
    """ Shannon entropy in nats, with ``0 log 0 = 0``. """
    logp = torch.where(p > 0, torch.log(p.clamp_min(1e-300)), torch.zeros_like(p))
    return -(p * logp).sum(-1)


def empirical_joint(samples, c):
    """ Normalized histogram of configurations.

    Args:
        samples (torch.LongTensor): Configurations ``(m, n)``
        c (int): Number of categories

    Return:
        torch.Tensor: Joint distribution ``(c**n,)``
    """
    if samples.dim() != 2 or samples.shape[0] == 0:
        raise ValueError('empirical_joint needs a nonempty (m, n) tensor of configurations')
    N = num_configurations(samples.shape[1], c)
    counts = torch.bincount(configuration_to_index(samples, c), minlength=N)
    return counts.double() / samples.shape[0]


def tv_distance(p, q):
    """ Total variation distance :math:`\\frac{1}{2} \\sum_\\alpha |p_\\alpha - q_\\alpha|`. """
    if p.shape != q.shape:
        raise DimensionError(f'Distributions have different shapes [{tuple(p.shape)} vs {tuple(q.shape)}]')
    return 0.5 * (p - q).abs().sum(-1)
