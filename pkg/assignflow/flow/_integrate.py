# -*- coding: utf-8 -*-
#
#   Geometric integration of assignment flows
#

import logging
from dataclasses import dataclass
import torch
import torch.nn as nn
from torchdiffeq import odeint
from ..errors import NonFiniteError
from ..geometry import exp_e, project_tangent
from ..data.transform import ArgmaxRounding, sample_reference

__all__ = ['IntegratorConfig', 'Trajectory', 'LiftedField', 'lifted_rhs', 'integrate', 'sample_configurations']
log = logging.getLogger(__name__)

SCHEMES = ('rk4', 'euler')
DIRECTIONS = ('forward', 'backward')


@dataclass(frozen=True)
class IntegratorConfig:
    """ Fixed-step integration settings.

    Args:
        scheme (str, optional): ``'rk4'`` or ``'euler'``; Default **'rk4'**
        steps (int, optional): Number of integration steps; Default **100**
        direction (str, optional): ``'forward'`` integrates from 0 to ``t_end``, ``'backward'`` from ``t_end`` to 0; Default **'forward'**
    """

    scheme: str = 'rk4'
    steps: int = 100
    direction: str = 'forward'

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f'Unknown integration scheme [{self.scheme}], choose rk4 or euler')
        if self.steps < 1:
            raise ValueError(f'Number of integration steps should be at least 1 [{self.steps}]')
        if self.direction not in DIRECTIONS:
            raise ValueError(f'Unknown integration direction [{self.direction}], choose forward or backward')

    def grid(self, t0, t1, dtype=torch.double):
        """ Time grid of ``steps + 1`` equidistant points from ``t0`` to ``t1``. """
        return torch.linspace(t0, t1, self.steps + 1, dtype=dtype)


@dataclass(frozen=True)
class Trajectory:
    """ Stored integration path.

    Attributes:
        times: Strictly monotone times ``(K+1,)``
        states: Tangent matrices ``(K+1, ..., n, c)`` at those times
    """

    times: torch.Tensor
    states: torch.Tensor

    def __len__(self):
        return self.times.shape[0]

    def __iter__(self):
        return zip(self.times, self.states)

    def assignments(self):
        """ Assignment states ``exp_e(1_W, u)`` along the path. """
        return exp_e(torch.full_like(self.states, 1.0 / self.states.shape[-1]), self.states)


def lifted_rhs(field, u):
    """ Right hand side :math:`\\Pi_0 F(exp_e(1_W, u))` of the assignment flow in barycenter tangent coordinates.

    The differential of ``exp_e(1_W, .)`` at ``u`` is the replicator map of ``W = exp_e(1_W, u)``,
    so ``W(t) = exp_e(1_W, u(t))`` solves :math:`\\dot W = R_W[F(W)]` whenever ``u`` solves this equation.

    Args:
        field (torch.nn.Module): Fitness field on assignment states ``(..., n, c)``
        u (torch.Tensor): Tangent matrix(es) ``(..., n, c)``
    """
    W = exp_e(torch.full_like(u, 1.0 / u.shape[-1]), u)
    return project_tangent(field(W))


class LiftedField(nn.Module):
    """ Wraps a fitness field as the ``func(t, u)`` of :func:`torchdiffeq.odeint`.

    The field is autonomous, ``t`` is only used to report the step of a non-finite state.
    """

    def __init__(self, field, t0, step_size):
        super().__init__()
        self.field = field
        self.t0 = t0
        self.step_size = step_size

    def forward(self, t, u):
        du = lifted_rhs(self.field, u)
        if not torch.isfinite(du).all():
            step = int(abs(float(t) - self.t0) / self.step_size)
            raise NonFiniteError(f'Non-finite flow state at integration step {step} [t={float(t):.6f}]', step=step)
        return du


def _time_span(t0, t1, config):
    if t0 is None:
        t0 = 0.0 if config.direction == 'forward' else 1.0
    if t1 is None:
        t1 = 1.0 if config.direction == 'forward' else 0.0
    if t0 == t1:
        raise ValueError('Integration needs t0 != t1')
    if (t1 > t0) != (config.direction == 'forward'):
        raise ValueError(f'Times t0={t0}, t1={t1} do not match the {config.direction} direction')
    return float(t0), float(t1)


def integrate(field, u_start, t0=None, t1=None, config=IntegratorConfig(), trajectory=False):
    """ Integrate :math:`\\dot u = \\Pi_0 F(exp_e(1_W, u))` with a fixed-step scheme.

    Args:
        field (torch.nn.Module): Fitness field
        u_start (torch.Tensor): Initial tangent matrix(es) ``(..., n, c)``
        t0 (float, optional): Start time; Default **0 forward, 1 backward**
        t1 (float, optional): End time; Default **1 forward, 0 backward**
        config (IntegratorConfig, optional): Integration settings; Default **RK4 with 100 steps**
        trajectory (bool, optional): Also return the :class:`Trajectory`; Default **False**

    Return:
        torch.Tensor or tuple: Tangent matrix(es) at ``t1``, and the trajectory if requested

    Raises:
        NonFiniteError: if the flow produces a non-finite state; ``err.step`` holds the integration step
    """
    t0, t1 = _time_span(t0, t1, config)
    times = config.grid(t0, t1)
    func = LiftedField(field, t0, abs(t1 - t0) / config.steps)

    with torch.no_grad():
        states = odeint(func, u_start.double(), times, method=config.scheme)

    bad = ~torch.isfinite(states.flatten(1)).all(1)
    if bad.any():
        step = int(bad.nonzero()[0, 0])
        raise NonFiniteError(f'Non-finite flow state at integration step {step}', step=step)

    if trajectory:
        return states[-1], Trajectory(times, states)
    return states[-1]


def sample_configurations(field, count, generator=None, config=IntegratorConfig(), t_end=1.0, chunk_size=20000, ties=False):
    """ Sample discrete configurations by integrating the flow and rounding.

    Every sample starts at ``u0`` from the reference distribution, is integrated to ``t_end``
    and rounded row-wise to the most likely category.

    Args:
        field (assignflow.network.module.FitnessField): Fitness field with ``n`` and ``c`` attributes
        count (int): Number of configurations
        generator (torch.Generator, optional): Random generator for the reference samples; Default **None**
        config (IntegratorConfig, optional): Integration settings; Default **RK4 with 100 steps**
        t_end (float, optional): Integration horizon; Default **1**
        chunk_size (int, optional): Number of samples integrated at once; Default **20000**
        ties (bool, optional): Also return the number of rows with a tied maximum; Default **False**

    Return:
        torch.LongTensor or tuple: Configurations ``(count, n)``, and the tie count if requested
    """
    if count < 0:
        raise ValueError(f'Sample count should be nonnegative [{count}]')
    if config.direction != 'forward':
        raise ValueError('Sampling integrates forward in time')

    rounding = ArgmaxRounding()
    samples = [torch.zeros((0, field.n), dtype=torch.long)]
    num_ties = 0
    for start in range(0, count, chunk_size):
        size = min(chunk_size, count - start)
        u0 = sample_reference(field.n, field.c, (size,), generator)
        u1 = integrate(field, u0, 0.0, t_end, config)
        W1 = exp_e(torch.full_like(u1, 1.0 / field.c), u1)
        samples.append(rounding(W1))
        num_ties += rounding.ties

    if num_ties:
        log.warning(f'{num_ties} argmax ties while sampling {count} configurations')
    samples = torch.cat(samples)

    if ties:
        return samples, num_ties
    return samples
