# -*- coding: utf-8 -*-
#
#   Importance sampling lower bounds on configuration log-likelihoods
#

import math
import logging
from dataclasses import dataclass, replace
import numpy as np
import torch
from scipy.linalg import helmert
from scipy.special import gammainc, gammaincinv
from torchdiffeq import odeint
from ..errors import NonFiniteError, RejectionError
from ..geometry import barycenter, log_e, smoothed_corner
from ._integrate import IntegratorConfig, lifted_rhs, sample_configurations

__all__ = [
    'build_basis',
    'region_radius',
    'chi2_cdf',
    'sigma_from_mass',
    'RegionSpec',
    'build_region',
    'Proposal',
    'proposal_log_density',
    'sample_proposal',
    'cnf_log_density',
    'ISEstimate',
    'loglik_lower_bound',
    'region_probability',
]
log = logging.getLogger(__name__)

MAX_TRIES = 1000


def build_basis(c):
    """ Orthonormal basis ``Q`` of the zero-sum subspace of :math:`\\mathbb{R}^c`.

    The columns are those of the (transposed) Helmert matrix without its constant row.

    Args:
        c (int): Number of categories (at least 2)

    Return:
        torch.Tensor: ``(c, c-1)`` matrix with :math:`Q^T Q = I` and :math:`Q^T 1 = 0`

    Example:
        >>> af.flow.build_basis(2)
        tensor([[ 0.7071],
                [-0.7071]], dtype=torch.float64)
    """
    if c < 2:
        raise ValueError(f'Number of categories should be at least 2 [{c}]')
    return torch.from_numpy(np.ascontiguousarray(helmert(c).T))


def region_radius(q_row, c):
    """ Largest radius of a ball around a corner tangent vector that stays in the argmax region of that corner.

    This is :math:`r = \\|\\tilde q\\|_2 \\sqrt{c / (2 (c-1))}`, evaluated along the last axis.
    For a smoothed corner the ball touches the boundary where the top category ties with another one.
    """
    norm = torch.linalg.vector_norm(q_row, dim=-1)
    if (norm == 0).any():
        raise ValueError('Region radius of a zero tangent vector is degenerate')
    return norm * math.sqrt(c / (2 * (c - 1)))


def chi2_cdf(x, k):
    """ Chi-square CDF with ``k`` degrees of freedom, as the regularized lower incomplete gamma function ``P(k/2, x/2)``. """
    if k < 1:
        raise ValueError(f'Degrees of freedom should be at least 1 [{k}]')
    if np.any(np.asarray(x) < 0):
        raise ValueError('Chi-square CDF needs x >= 0')
    return gammainc(k / 2, np.asarray(x, dtype=np.float64) / 2)


def sigma_from_mass(r, c, mass=0.8):
    """ Variance ``s2`` of an isotropic normal in ``c-1`` dimensions that puts ``mass`` inside the ball of radius ``r``.

    Solves ``chi2_cdf(r**2 / s2, c-1) == mass`` through the inverse regularized incomplete gamma function.

    Return:
        float or numpy.ndarray: Variance with the shape of ``r``
    """
    if not 0 < mass < 1:
        raise ValueError(f'Truncation mass should be in (0, 1) [{mass}]')
    x = 2 * gammaincinv((c - 1) / 2, mass)
    return np.asarray(r, dtype=np.float64) ** 2 / x


@dataclass(frozen=True)
class RegionSpec:
    """ Importance sampling geometry of one configuration.

    Attributes:
        alpha: Configuration ``(n,)``
        center: Tangent matrix of the smoothed corner of ``alpha`` ``(n, c)``
        radius: Per-variable ball radius ``(n,)``
        sigma2: Per-variable proposal variance ``(n,)``
        mass: Truncation mass
        basis: Orthonormal tangent basis ``(c, c-1)``
    """

    alpha: torch.Tensor
    center: torch.Tensor
    radius: torch.Tensor
    sigma2: torch.Tensor
    mass: float
    basis: torch.Tensor

    @property
    def n(self):
        return self.center.shape[-2]

    @property
    def c(self):
        return self.center.shape[-1]


def build_region(alpha, c, eps=0.01, mass=0.8):
    """ Build the :class:`RegionSpec` of a configuration. """
    alpha = torch.as_tensor(alpha, dtype=torch.long)
    n = alpha.shape[-1]
    center = log_e(barycenter(n, c), smoothed_corner(alpha, c, eps))
    radius = region_radius(center, c)
    sigma2 = torch.from_numpy(sigma_from_mass(radius.numpy(), c, mass))
    return RegionSpec(alpha, center, radius, sigma2, mass, build_basis(c))


class Proposal:
    """ Samples of the truncated normal proposal of a region.

    Attributes:
        v: Tangent matrices ``(..., n, c)``
        coords: Basis coordinates ``(..., n, c-1)``
        log_density: Proposal log-density with respect to the basis coordinates ``(...)``
        trials: Number of draws needed per variable ``(..., n)``
    """

    def __init__(self, v, coords, log_density, trials):
        self.v = v
        self.coords = coords
        self.log_density = log_density
        self.trials = trials

    @property
    def acceptance_rate(self):
        return float(self.trials.numel() / self.trials.sum())


def proposal_log_density(region, coords):
    """ Log-density of the truncated normal proposal at basis coordinates ``(..., n, c-1)`` inside the region balls. """
    k = region.c - 1
    sq = ((coords - region.center @ region.basis) ** 2).sum(-1)
    log_density = -0.5 * k * torch.log(2 * math.pi * region.sigma2) - sq / (2 * region.sigma2) - math.log(region.mass)
    return log_density.sum(-1)


def sample_proposal(region, generator=None, size=(), max_tries=MAX_TRIES):
    """ Draw from the proposal distribution of a region.

    Per variable ``i`` the proposal is the normal distribution :math:`N(Q^T \\tilde q_i, \\sigma_i^2 I)`
    in basis coordinates, truncated to the ball of radius ``r_i`` around its mean and sampled by rejection.

    Args:
        region (RegionSpec): Region to sample
        generator (torch.Generator, optional): Random generator; Default **None**
        size (tuple, optional): Leading batch dimensions; Default **()**
        max_tries (int, optional): Draws per variable before giving up; Default **1000**

    Return:
        Proposal: samples with their log-density

    Raises:
        RejectionError: if a variable had no accepted draw after ``max_tries``
    """
    size = tuple(size) if not isinstance(size, int) else (size,)
    k = region.c - 1
    mean = region.center @ region.basis
    sigma = region.sigma2.sqrt().unsqueeze(-1)
    radius = region.radius

    coords = torch.empty(size + (region.n, k), dtype=torch.double)
    accepted = torch.zeros(size + (region.n,), dtype=torch.bool)
    trials = torch.zeros(size + (region.n,), dtype=torch.long)
    for _ in range(max_tries):
        todo = ~accepted
        if not todo.any():
            break
        draw = mean + sigma * torch.randn(size + (region.n, k), dtype=torch.double, generator=generator)
        inside = torch.linalg.vector_norm(draw - mean, dim=-1) <= radius
        take = todo & inside
        coords[take] = draw[take]
        trials += todo.long()
        accepted |= take

    if not accepted.all():
        log.error(f'Rejection cap of {max_tries} draws reached for {int((~accepted).sum())} factors')
        raise RejectionError(f'Truncated normal proposal exceeded {max_tries} draws per factor')

    return Proposal(coords @ region.basis.T, coords, proposal_log_density(region, coords), trials)


def _exact_divergence(dz, z):
    flat_dz = dz.flatten(1)
    div = torch.zeros(z.shape[0], dtype=z.dtype)
    if not dz.requires_grad:
        return div
    for i in range(flat_dz.shape[1]):
        grad = torch.autograd.grad(flat_dz[:, i].sum(), z, retain_graph=True, allow_unused=True)[0]
        if grad is not None:
            div += grad.flatten(1)[:, i]
    return div


def _hutchinson_divergence(dz, z, noise):
    if not dz.requires_grad:
        return torch.zeros(z.shape[0], dtype=z.dtype)
    vjp = torch.autograd.grad(dz, z, noise, allow_unused=True)[0]
    if vjp is None:
        return torch.zeros(z.shape[0], dtype=z.dtype)
    return (vjp * noise).flatten(1).sum(1)


class _AugmentedDynamics(torch.nn.Module):
    """ Dynamics of the basis coordinates together with the divergence of the flow. """

    def __init__(self, field, basis, divergence, noise=None):
        super().__init__()
        self.field = field
        self.basis = basis
        self.divergence = divergence
        self.noise = noise

    def forward(self, t, state):
        z, _ = state
        with torch.enable_grad():
            z = z.detach().requires_grad_(True)
            dz = lifted_rhs(self.field, z @ self.basis.T) @ self.basis
            if self.divergence == 'exact':
                div = _exact_divergence(dz, z)
            else:
                div = _hutchinson_divergence(dz, z, self.noise)

        if not torch.isfinite(dz).all() or not torch.isfinite(div).all():
            raise NonFiniteError(f'Non-finite augmented state [t={float(t):.6f}]')
        return dz.detach(), div.detach()


def cnf_log_density(
    field, v, t_end=1.0, config=IntegratorConfig(direction='backward'), divergence='exact', generator=None, parts=False
):
    """ Log-density of the flow-transported reference distribution at tangent matrices ``v``.

    The state is pulled back from ``t_end`` to 0 together with the integrated divergence of the flow,
    both in basis coordinates of dimension ``n (c-1)``:
    :math:`\\log \\nu_{t}(v) = \\log N(z_0) - \\int_0^{t} div\\, f(z_s)\\, ds`.

    Args:
        field (torch.nn.Module): Fitness field
        v (torch.Tensor): Tangent matrices ``(..., n, c)``
        t_end (float, optional): Time of the transported distribution; Default **1**
        config (IntegratorConfig, optional): Integration settings, always run backward; Default **RK4 with 100 steps**
        divergence (str, optional): ``'exact'`` trace through one autograd pass per coordinate, or ``'hutchinson'``; Default **'exact'**
        generator (torch.Generator, optional): Generator for the Hutchinson noise; Default **None**
        parts (bool, optional): Also return the base log-density and the log-determinant correction; Default **False**

    Return:
        torch.Tensor or tuple: Log-densities ``(...)``, followed by ``log N(z_0)`` and the correction if ``parts`` is set
    """
    if divergence not in ('exact', 'hutchinson'):
        raise ValueError(f'Unknown divergence estimator [{divergence}], choose exact or hutchinson')
    if not 0 < t_end <= 1:
        raise ValueError(f't_end should be in (0, 1] [{t_end}]')

    c = v.shape[-1]
    lead = v.shape[:-2]
    basis = build_basis(c)
    z1 = (v.double() @ basis).reshape(-1, *v.shape[-2:-1], c - 1)
    dim = z1[0].numel()

    noise = None
    if divergence == 'hutchinson':
        noise = torch.randn(z1.shape, dtype=torch.double, generator=generator)

    config = replace(config, direction='backward')
    times = config.grid(t_end, 0.0)
    func = _AugmentedDynamics(field, basis, divergence, noise)
    with torch.no_grad():
        zs, delta = odeint(func, (z1, torch.zeros(z1.shape[0], dtype=torch.double)), times, method=config.scheme)
    z0, delta = zs[-1], delta[-1]

    log_base = -0.5 * (z0.flatten(1) ** 2).sum(1) - 0.5 * dim * math.log(2 * math.pi)
    log_density = log_base + delta
    if parts:
        return log_density.reshape(lead), log_base.reshape(lead), delta.reshape(lead)
    return log_density.reshape(lead)


@dataclass(frozen=True)
class ISEstimate:
    """ Importance sampling lower bound on :math:`\\log p_\\alpha`.

    Attributes:
        bound: Mean of the per-sample terms, in nats
        terms: Per-sample terms ``log nu(v_k) - log rho(v_k)``
        n_samples: Number of importance samples
        stderr: Standard error of the bound, NaN for a single sample
        n: Number of variables, used for bits per dimension
    """

    bound: float
    terms: torch.Tensor
    n_samples: int
    stderr: float
    n: int

    @property
    def bits_per_dim(self):
        """ Negative bound in bits per variable, an upper bound on the code length. """
        return -self.bound / (self.n * math.log(2))


def loglik_lower_bound(
    field,
    alpha,
    n_samples=200,
    generator=None,
    eps=0.01,
    mass=0.8,
    t_end=1.0,
    config=IntegratorConfig(direction='backward'),
    divergence='exact',
):
    """ Importance sampling lower bound on the log-probability of a configuration.

    The log-density of the transported reference distribution is averaged against the truncated normal proposal of the region of ``alpha``.
    By Jensen's inequality the average is a lower bound on the log-probability of the ball region,
    which lies inside the argmax region of ``alpha``.

    Args:
        field (assignflow.network.module.FitnessField): Fitness field
        alpha (torch.LongTensor): Configuration ``(n,)``
        n_samples (int, optional): Number of importance samples; Default **200**
        generator (torch.Generator, optional): Random generator; Default **None**
        eps (float, optional): Smoothing constant of the corners; Default **0.01**
        mass (float, optional): Truncation mass of the proposal; Default **0.8**
        t_end (float, optional): Time of the transported distribution; Default **1**
        config (IntegratorConfig, optional): Integration settings; Default **RK4 with 100 steps**
        divergence (str, optional): Divergence estimator; Default **'exact'**

    Return:
        ISEstimate: bound in nats with its standard error
    """
    if n_samples < 1:
        raise ValueError(f'Number of importance samples should be at least 1 [{n_samples}]')

    region = build_region(alpha, field.c, eps, mass)
    proposal = sample_proposal(region, generator, (n_samples,))
    log_nu = cnf_log_density(field, proposal.v, t_end, config, divergence, generator)
    terms = log_nu - proposal.log_density

    bound = float(terms.mean())
    stderr = float(terms.std() / math.sqrt(n_samples)) if n_samples > 1 else math.nan
    log.test(f'{region.alpha.tolist()} bound:{bound:.5f} nats [stderr {stderr:.5f}]')
    return ISEstimate(bound, terms, n_samples, stderr, region.n)


def region_probability(field, alpha, count, generator=None, config=IntegratorConfig(), t_end=1.0):
    """ Monte-Carlo estimate of the probability that a flow sample rounds to ``alpha``.

    Return:
        tuple: (probability, standard error)
    """
    samples = sample_configurations(field, count, generator, config, t_end)
    hits = (samples == torch.as_tensor(alpha, dtype=torch.long)).all(-1).double()
    p = float(hits.mean())
    return p, math.sqrt(max(p * (1 - p), 0.0) / count)
