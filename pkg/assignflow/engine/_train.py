# -*- coding: utf-8 -*-
#
#   Riemannian conditional flow matching training
#

import logging
from dataclasses import asdict
import numpy as np
import torch
from ..errors import DimensionError, NonFiniteError
from ..data import resampling_dataloader
from ..data.transform import make_training_tuple
from ..models import build_field
from ..network.loss import RCFMLoss
from ._engine import Engine
from ._parameter import HyperParameters, TrainConfig

__all__ = ['FlowMatchingEngine', 'train', 'derive_generators']
log = logging.getLogger(__name__)


def derive_generators(seed, count=3):
    """ Independent :class:`torch.Generator` objects derived from one seed.

    :func:`train` uses three of them: parameter initialization, data order and tuple noise.
    """
    states = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    return [torch.Generator().manual_seed(int(s) & 0x7FFF_FFFF_FFFF_FFFF) for s in states]


class FlowMatchingEngine(Engine):
    """ Engine that fits a fitness field to conditional e-geodesic velocities.

    Every step turns a batch of data configurations into training tuples,
    evaluates the :class:`~assignflow.network.loss.RCFMLoss` and takes an optimizer step.

    Args:
        params (assignflow.engine.HyperParameters): Run configuration with ``network``, ``optimizers`` and optionally ``schedulers``
        dataloader (iterable): Batches of configurations, one per step
        generator (torch.Generator, optional): Generator for times and reference samples; Default **None**
        log_interval (int, optional): Number of steps between loss reports; Default **100**

    Attributes:
        self.loss_trace: Loss value of every step
    """

    def __init__(self, params, dataloader, generator=None, log_interval=100, **kwargs):
        super().__init__(params, dataloader, **kwargs)
        self.generator = generator
        self.log_interval = log_interval
        self.loss = RCFMLoss()
        self.loss_trace = []
        self.train_loss = None
        self.add_hook('batch_end', self.report, max(1, log_interval))

    def process_batch(self, data):
        tuples = make_training_tuple(data, self.c, self.eps, self.generator)
        try:
            loss = self.loss(self.network(tuples.W_t), tuples)
        except NonFiniteError as err:
            err.step = self.batch
            raise

        loss.backward()
        self.train_loss = loss.item()

    def train_batch(self):
        for name, p in self.network.named_parameters():
            if p.grad is not None and not torch.isfinite(p.grad).all():
                raise NonFiniteError(f'Non-finite gradient for {name} at step {self.batch}', step=self.batch)

        self.optimizer.step()
        self.optimizer.zero_grad()
        if self.schedulers:
            self.scheduler.step()

        self.loss_trace.append(self.train_loss)

    def report(self):
        window = self.loss_trace[-self.log_interval :]
        self.log(f'{self.batch}/{self.steps} Loss:{sum(window) / len(window):.5f}')


def train(dataset, params, field=None, log_interval=100):
    """ Train a fitness field with Riemannian conditional flow matching.

    Args:
        dataset (assignflow.data.ConfigurationDataset): Training configurations, resampled with replacement
        params (HyperParameters or TrainConfig): Training settings
        field (assignflow.network.module.FitnessField, optional): Field to continue training; Default **new field from params**
        log_interval (int, optional): Number of steps between loss reports; Default **100**

    Return:
        tuple: (trained field, list with the loss of every step)

    Note:
        Given the same seed, settings and dataset, two runs produce bitwise identical parameters and loss traces.
    """
    if isinstance(params, TrainConfig):
        params = HyperParameters(**asdict(params))
    if params.n is None:
        params.n = dataset.n
    if params.c is None:
        params.c = dataset.c
    if (params.n, params.c) != (dataset.n, dataset.c):
        raise DimensionError(f'Dataset has n={dataset.n} c={dataset.c}, configuration expects n={params.n} c={params.c}')

    init_gen, data_gen, noise_gen = derive_generators(params.seed)
    if field is None:
        field = build_field(params.variant, params.n, params.c, params.hidden, params.bias, generator=init_gen)
    elif (field.n, field.c) != (params.n, params.c):
        raise DimensionError(f'Field has n={field.n} c={field.c}, dataset has n={params.n} c={params.c}')

    if params.steps == 0:
        log.info('Zero training steps, returning the initialized field')
        return field, []

    optimizer = torch.optim.Adam(field.parameters(), lr=params.lr, betas=(0.9, 0.999), eps=1e-8)
    scheduler = None
    if params.lr_schedule == 'cosine':
        scheduler = torch.optim.lr_scheduler.CosineAnnealingLR(optimizer, T_max=params.steps)

    params.network = field
    params.optimizers = params.schedulers = None
    params.add_optimizer(optimizer)
    if scheduler is not None:
        params.add_scheduler(scheduler)
    params.batch = 0

    loader = resampling_dataloader(dataset, params.batch_size, params.steps, generator=data_gen)
    engine = FlowMatchingEngine(params, loader, generator=noise_gen, log_interval=log_interval)

    deterministic = torch.are_deterministic_algorithms_enabled()
    try:
        torch.use_deterministic_algorithms(params.deterministic or deterministic)
        engine()
    finally:
        torch.use_deterministic_algorithms(deterministic)

    log.info(f'Finished training after {params.batch} steps')
    return field, engine.loss_trace
