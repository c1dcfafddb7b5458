# -*- coding: utf-8 -*-
#
#   Configuration datasets and dataloading mechanisms
#

import logging
import torch
from torch.utils.data.dataset import Dataset as torchDataset
from torch.utils.data.sampler import BatchSampler, RandomSampler
from torch.utils.data.dataloader import DataLoader as torchDataLoader
from ..errors import DimensionError

__all__ = ['ConfigurationDataset', 'resampling_dataloader']
log = logging.getLogger(__name__)


class ConfigurationDataset(torchDataset):
    """ Dataset of discrete configurations with declared dimensions.

    Args:
        labels (torch.LongTensor or array-like): Configurations with shape ``(m, n)``
        c (int): Number of categories
        n (int, optional): Declared number of variables; Default **labels.shape[1]**

    Note:
        Indexing with a list or tensor of indices returns the whole batch at once.
        This allows a :class:`~torch.utils.data.BatchSampler` to be used directly as sampler of a dataloader.

    Example:
        >>> data = af.data.ConfigurationDataset([[0, 0], [1, 1], [0, 1]], c=2)
        >>> len(data), data.n
        (3, 2)
        >>> data[[0, 1]]
        tensor([[0, 0],
                [1, 1]])
    """

    def __init__(self, labels, c, n=None):
        super().__init__()
        labels = torch.as_tensor(labels, dtype=torch.long)
        if labels.dim() != 2 or labels.shape[0] == 0:
            raise ValueError('A dataset needs a nonempty (m, n) array of configurations')
        if n is not None and labels.shape[1] != n:
            raise DimensionError(f'Configurations have {labels.shape[1]} variables, declared n={n}')
        if c < 2:
            raise ValueError(f'Number of categories should be at least 2 [{c}]')
        if (labels < 0).any() or (labels >= c).any():
            raise ValueError(f'Configuration labels out of range [0, {c})')

        self.labels = labels
        self.n = labels.shape[1]
        self.c = c

    def __len__(self):
        return self.labels.shape[0]

    def __getitem__(self, index):
        if isinstance(index, int):
            return self.labels[index]
        return self.labels[torch.as_tensor(index, dtype=torch.long)]


def resampling_dataloader(dataset, batch_size, steps, generator=None):
    """ Dataloader yielding ``steps`` batches resampled from the dataset with replacement.

    This realizes the expectation over configurations drawn from the empirical data distribution.

    Args:
        dataset (ConfigurationDataset): Training configurations
        batch_size (int): Number of configurations per batch
        steps (int): Number of batches
        generator (torch.Generator, optional): Generator that fixes the data order; Default **None**
    """
    sampler = RandomSampler(dataset, replacement=True, num_samples=batch_size * steps, generator=generator)
    return torchDataLoader(
        dataset,
        batch_size=None,
        sampler=BatchSampler(sampler, batch_size, drop_last=False),
    )
