# -*- coding: utf-8 -*-
#
#   Synthetic target distributions over configurations
#

import logging
import numpy as np
import torch
from ..geometry import index_to_configuration, num_configurations

__all__ = ['coupled_binaries', 'gaussian_mixture', 'pinwheel', 'mixture_modes', 'sample_joint', 'TARGETS']
log = logging.getLogger(__name__)

GRID_EXTENT = 4.0


def coupled_binaries():
    """ Two coupled binary variables with joint ``(0.45, 0.05, 0.05, 0.45)``.

    Both marginals are uniform, so the distribution does not factorize.

    Return:
        tuple: (joint, n, c)
    """
    return torch.tensor([0.45, 0.05, 0.05, 0.45], dtype=torch.double), 2, 2


def _grid(c):
    return np.linspace(-GRID_EXTENT, GRID_EXTENT, c)


def _mixture_params(num_modes=8, radius=3.0):
    angles = 2 * np.pi * np.arange(num_modes) / num_modes
    means = radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    weights = np.linspace(2, 1, num_modes)
    return means, weights / weights.sum()


def gaussian_mixture(c, std=0.4):
    """ Eight Gaussian modes on a circle with decreasing weights, discretized on a ``c x c`` grid.

    The first variable indexes the horizontal grid coordinate, the second the vertical one.

    Args:
        c (int): Grid resolution, ie. number of categories per variable
        std (float, optional): Standard deviation of every mode; Default **0.4**

    Return:
        tuple: (joint, 2, c)
    """
    means, weights = _mixture_params()
    grid = _grid(c)
    x, y = np.meshgrid(grid, grid, indexing='ij')
    density = np.zeros((c, c))
    for (mx, my), w in zip(means, weights):
        density += w * np.exp(-((x - mx) ** 2 + (y - my) ** 2) / (2 * std ** 2))

    p = density.ravel()
    return torch.from_numpy(p / p.sum()), 2, c


def mixture_modes(c):
    """ Grid configurations closest to the mixture means, ordered by decreasing mode weight. """
    means, _ = _mixture_params()
    grid = _grid(c)
    cells = [[int(np.abs(grid - m).argmin()) for m in mean] for mean in means]
    return torch.tensor(cells, dtype=torch.long)


def pinwheel(c, num_arms=5, num_points=200000, seed=0):
    """ Five-armed pinwheel, discretized on a ``c x c`` grid by a fixed-seed histogram.

    Args:
        c (int): Grid resolution, ie. number of categories per variable
        num_arms (int, optional): Number of arms; Default **5**
        num_points (int, optional): Number of points in the histogram; Default **200000**
        seed (int, optional): Seed of the point cloud; Default **0**

    Return:
        tuple: (joint, 2, c)
    """
    radial_std = 0.3
    tangential_std = 0.1
    rate = 0.25

    rng = np.random.RandomState(seed)
    per_arm = num_points // num_arms
    rads = np.linspace(0, 2 * np.pi, num_arms, endpoint=False)
    features = rng.randn(num_arms * per_arm, 2) * np.array([radial_std, tangential_std])
    features[:, 0] += 1.0
    labels = np.repeat(np.arange(num_arms), per_arm)

    angles = rads[labels] + rate * np.exp(features[:, 0])
    rotations = np.stack([np.cos(angles), -np.sin(angles), np.sin(angles), np.cos(angles)], axis=1).reshape(-1, 2, 2)
    points = 2 * np.einsum('ti,tij->tj', features, rotations)

    # Bin edges halfway between grid points, outer bins open ended
    grid = _grid(c)
    edges = np.concatenate([[-np.inf], (grid[1:] + grid[:-1]) / 2, [np.inf]])
    hist, _, _ = np.histogram2d(points[:, 0], points[:, 1], bins=[edges, edges])

    p = hist.ravel()
    return torch.from_numpy(p / p.sum()), 2, c


def sample_joint(p, n, c, count, generator=None):
    """ Draw i.i.d. configurations from a dense joint by inverse-CDF sampling.

    Args:
        p (torch.Tensor): Joint distribution ``(c**n,)``
        n (int): Number of variables
        c (int): Number of categories
        count (int): Number of configurations
        generator (torch.Generator, optional): Random generator; Default **None**

    Return:
        torch.LongTensor: Configurations ``(count, n)``
    """
    N = num_configurations(n, c)
    if p.shape != (N,):
        raise ValueError(f'Joint has shape {tuple(p.shape)}, expected ({N},)')

    cdf = torch.cumsum(p.double(), 0)
    cdf = cdf / cdf[-1]
    uniform = torch.rand(count, dtype=torch.double, generator=generator)
    index = torch.searchsorted(cdf, uniform, right=True).clamp_max(N - 1)
    return index_to_configuration(index, n, c)


#: Built-in targets by name, each a callable of the category count
TARGETS = {
    'coupled_binaries': lambda c=2: coupled_binaries(),
    'gaussian_mixture': gaussian_mixture,
    'pinwheel': pinwheel,
}
