# -*- coding: utf-8 -*-
#
#   Text and CSV file formats
#

import csv
import logging
import re
import numpy as np
import torch
from ..errors import DenseBudgetError, DimensionError
from ..geometry import DENSE_BUDGET, configuration_to_index, index_to_configuration

__all__ = [
    'read_configurations',
    'write_configurations',
    'read_joint',
    'write_joint',
    'write_histogram',
    'write_loss_trace',
    'write_likelihood_report',
]
log = logging.getLogger(__name__)

_header_re = re.compile(r'^#\s*n\s*=\s*(\d+)\s+c\s*=\s*(\d+)\s*$')


def _parse_header(line, filename):
    match = _header_re.match(line.strip())
    if match is None:
        raise ValueError(f'Missing "# n=<n> c=<c>" header in {filename}')
    return int(match.group(1)), int(match.group(2))


def read_configurations(filename, n=None, c=None):
    """ Read a configuration file.

    The format is a header line ``# n=<n> c=<c>`` followed by one configuration per line,
    as space-separated base-10 labels. A completely empty file holds no configurations.

    Args:
        filename (str or path-like): File to read
        n (int, optional): Expected number of variables; Default **from header**
        c (int, optional): Expected number of categories; Default **from header**

    Return:
        tuple: (``(m, n)`` long tensor, n, c)
    """
    with open(filename, 'r') as f:
        lines = [line.strip() for line in f.read().splitlines()]
    lines = [line for line in lines if line]

    if len(lines) == 0:
        if n is None or c is None:
            raise ValueError(f'{filename} is empty and no dimensions were given')
        return torch.zeros((0, n), dtype=torch.long), n, c

    fn, fc = _parse_header(lines[0], filename)
    if (n is not None and n != fn) or (c is not None and c != fc):
        raise DimensionError(f'{filename} declares n={fn} c={fc}, expected n={n} c={c}')

    rows = [line.split() for line in lines[1:] if not line.startswith('#')]
    labels = np.array(rows, dtype=np.int64).reshape(len(rows), fn) if rows else np.zeros((0, fn), dtype=np.int64)
    if (labels < 0).any() or (labels >= fc).any():
        raise ValueError(f'Labels out of range [0, {fc}) in {filename}')

    log.debug(f'Read {len(rows)} configurations from {filename}')
    return torch.from_numpy(labels), fn, fc


def write_configurations(filename, labels, c):
    """ Write configurations in the format read by :func:`read_configurations`. """
    labels = torch.as_tensor(labels, dtype=torch.long)
    n = labels.shape[1]
    with open(filename, 'w') as f:
        f.write(f'# n={n} c={c}\n')
        for row in labels.tolist():
            f.write(' '.join(str(label) for label in row) + '\n')


def read_joint(filename):
    """ Read an explicit joint distribution file.

    The format is a header line ``# n=<n> c=<c>`` followed by ``c**n`` whitespace-separated probabilities
    in row-major configuration order.

    Return:
        tuple: (``(c**n,)`` double tensor, n, c)
    """
    with open(filename, 'r') as f:
        lines = f.read().splitlines()
    lines = [line for line in lines if line.strip()]
    if len(lines) == 0:
        raise ValueError(f'{filename} is empty')

    n, c = _parse_header(lines[0], filename)
    N = c ** n
    if N > DENSE_BUDGET:
        raise DenseBudgetError(f'Joint distribution in {filename} has {N} entries, above the budget of {DENSE_BUDGET}')

    values = np.array(' '.join(lines[1:]).split(), dtype=np.float64)
    if values.size != N:
        raise DimensionError(f'{filename} holds {values.size} probabilities, expected {N}')
    if (values < 0).any() or abs(values.sum() - 1) > 1e-10:
        raise ValueError(f'{filename} is not a probability vector [sum={values.sum():.12g}]')
    return torch.from_numpy(values), n, c


def write_joint(filename, p, n, c):
    """ Write a joint distribution in the format read by :func:`read_joint`. """
    with open(filename, 'w') as f:
        f.write(f'# n={n} c={c}\n')
        f.write('\n'.join(repr(float(v)) for v in p.tolist()) + '\n')


def write_histogram(filename, samples, n, c):
    """ Write the histogram of sampled configurations as CSV ``index,configuration,count,frequency``. """
    N = c ** n
    if samples.shape[0] > 0:
        counts = torch.bincount(configuration_to_index(samples, c), minlength=N)
    else:
        counts = torch.zeros(N, dtype=torch.long)
    total = max(samples.shape[0], 1)

    with open(filename, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['index', 'configuration', 'count', 'frequency'])
        for index, alpha in enumerate(index_to_configuration(torch.arange(N), n, c).tolist()):
            count = int(counts[index])
            writer.writerow([index, ' '.join(map(str, alpha)), count, count / total])


def write_loss_trace(filename, losses):
    """ Write a loss trace as CSV ``step,loss``, with steps counted from 1. """
    with open(filename, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['step', 'loss'])
        for step, loss in enumerate(losses, 1):
            writer.writerow([step, repr(float(loss))])


def write_likelihood_report(filename, rows, c):
    """ Write likelihood bounds as CSV.

    Args:
        filename (str or path-like): Output file
        rows (list): ``(configuration, ISEstimate)`` pairs
        c (int): Number of categories, used for the flat configuration index
    """
    with open(filename, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['index', 'configuration', 'bound_nats', 'bound_bits_per_dim', 'n_samples', 'stderr'])
        for alpha, estimate in rows:
            alpha = torch.as_tensor(alpha, dtype=torch.long)
            writer.writerow([
                int(configuration_to_index(alpha, c)),
                ' '.join(str(a) for a in alpha.tolist()),
                repr(estimate.bound),
                repr(estimate.bits_per_dim),
                estimate.n_samples,
                repr(estimate.stderr),
            ])
