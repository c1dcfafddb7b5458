# -*- coding: utf-8 -*-
#
#   HyperParameters container class
#

import logging
import importlib.util
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path
from ..flow import IntegratorConfig

__all__ = ['HyperParameters', 'TrainConfig', 'RUN_KEYS']
log = logging.getLogger(__name__)


def _parse_bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f'Cannot interpret [{value}] as a boolean')


def _parse_hidden(value):
    if isinstance(value, str):
        value = [v for v in value.replace(' ', '').split(',') if v]
    return tuple(int(v) for v in value)


def _parse_optional(kind):
    def parse(value):
        if value is None or (isinstance(value, str) and value.strip().lower() in ('', 'none')):
            return None
        return kind(value)

    return parse


def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, tuple):
        return ','.join(str(v) for v in value)
    return str(value)


#: Run configuration keys with their parser and default value
RUN_KEYS = {
    'n': (_parse_optional(int), None),
    'c': (_parse_optional(int), None),
    'variant': (str, 'linear'),
    'hidden': (_parse_hidden, (256, 256)),
    'bias': (_parse_bool, False),
    'eps': (float, 0.01),
    'batch_size': (int, 512),
    'steps': (int, 2000),
    'lr': (float, 0.0005),
    'lr_schedule': (str, 'constant'),
    'seed': (int, 0),
    'scheme': (str, 'rk4'),
    'integration_steps': (int, 100),
    't_end': (float, 1.0),
    'mass': (float, 0.8),
    'n_samples': (int, 200),
    'divergence': (str, 'exact'),
    'deterministic': (_parse_bool, False),
    'dataset': (_parse_optional(str), None),
    'checkpoint': (_parse_optional(str), None),
    'output': (_parse_optional(str), None),
}

CHOICES = {
    'variant': ('linear', 'mlp'),
    'lr_schedule': ('constant', 'cosine'),
    'scheme': ('rk4', 'euler'),
    'divergence': ('exact', 'hutchinson'),
}


@dataclass(frozen=True)
class TrainConfig:
    """ Settings consumed by :func:`~assignflow.engine.train`. """

    eps: float = 0.01
    batch_size: int = 512
    steps: int = 2000
    lr: float = 0.0005
    lr_schedule: str = 'constant'
    seed: int = 0
    variant: str = 'linear'
    hidden: tuple = (256, 256)
    bias: bool = False
    deterministic: bool = False


class HyperParameters:
    """ This class is the run configuration of assignflow.
    It holds every run key with its default value, the runtime objects of a training and a step counter.

    Args:
        network (torch.nn.Module, optional): Fitness field; Default **None**
        optimizers (torch.optim.Optimizer or list of torch.optim.Optimizer, optional): Optimizer(s) for the field; Default **None**
        schedulers (torch.optim._LRScheduler or list of torch.optim._LRScheduler, optional): Scheduler(s) for the field; Default **None**
        **kwargs (dict, optional): Run keys, see :data:`RUN_KEYS`; string values are parsed to the type of the key

    Attributes:
        self.batch: Number of batches processed; Gets initialized to **0**
        self.*: All run keys can be accessed as attributes of this object

    Note:
        If you pass a ``kwarg`` that starts with an **_**,
        the parameter class will store it as a regular property without the leading **_**, but it will not serialize this variable.
        Any other key that is not a run key raises a :class:`ValueError`.

    Example:
        >>> params = af.engine.HyperParameters(steps='10', hidden='64,64')
        >>> params.steps, params.hidden, params.lr
        (10, (64, 64), 0.0005)
    """

    def __init__(self, network=None, optimizers=None, schedulers=None, **kwargs):
        self.network = network
        self.batch = 0

        if optimizers is None or isinstance(optimizers, Iterable):
            self.optimizers = optimizers
        else:
            self.optimizers = [optimizers]

        if schedulers is None or isinstance(schedulers, Iterable):
            self.schedulers = schedulers
        else:
            self.schedulers = [schedulers]

        self.explicit = set()
        self.__no_serialize = ['network', 'optimizers', 'schedulers', 'batch', 'explicit']
        for key, (_, default) in RUN_KEYS.items():
            setattr(self, key, default)

        unknown = []
        for key, val in kwargs.items():
            if key.startswith('_'):
                if hasattr(self, key[1:]):
                    log.error(f'{key[1:]} attribute already exists as a HyperParameter and will not be overwritten.')
                else:
                    setattr(self, key[1:], val)
                    self.__no_serialize.append(key[1:])
            elif key in RUN_KEYS:
                self.set(key, val)
            else:
                unknown.append(key)

        if unknown:
            raise ValueError(f'Unknown run configuration keys: {", ".join(sorted(unknown))}')
        self.validate()

    def set(self, key, value):
        """ Parse and set a run key. """
        if key not in RUN_KEYS:
            raise ValueError(f'Unknown run configuration key [{key}]')
        try:
            setattr(self, key, RUN_KEYS[key][0](value))
            self.explicit.add(key)
        except (TypeError, ValueError) as err:
            raise ValueError(f'Invalid value for {key} [{value}]') from err

    def validate(self):
        """ Check the run keys for consistency.

        Raises:
            ValueError: if a value is out of range or not one of the allowed choices
        """
        for key, choices in CHOICES.items():
            if getattr(self, key) not in choices:
                raise ValueError(f'{key} should be one of {"|".join(choices)} [{getattr(self, key)}]')
        if not 0 < self.eps < 1:
            raise ValueError(f'eps should be in the open interval (0, 1) [{self.eps}]')
        if not 0 < self.mass < 1:
            raise ValueError(f'mass should be in the open interval (0, 1) [{self.mass}]')
        if not 0 < self.t_end <= 1:
            raise ValueError(f't_end should be in (0, 1] [{self.t_end}]')
        if self.batch_size < 1 or self.steps < 0 or self.integration_steps < 1 or self.n_samples < 1:
            raise ValueError('batch_size, integration_steps and n_samples should be positive, steps nonnegative')
        if self.lr <= 0:
            raise ValueError(f'lr should be positive [{self.lr}]')
        if any(h < 1 for h in self.hidden):
            raise ValueError(f'Hidden layer sizes should be positive [{self.hidden}]')
        for key in ('n', 'c'):
            value = getattr(self, key)
            if value is not None and value < (1 if key == 'n' else 2):
                raise ValueError(f'Invalid dimension {key}={value}')

    @classmethod
    def from_file(cls, path, variable='params', **kwargs):
        """ Create a HyperParameters object from a configuration file.

        Args:
            path (str or path-like object): Path to the configuration file
            variable (str, optional): Variable to extract from a python configuration file; Default **'params'**
            **kwargs (dict, optional): Extra parameters that are passed to the extracted variable if it is a callable object

        Note:
            Files ending in ``.py`` are imported and the variable is extracted from them.
            It can be a :class:`~assignflow.engine.HyperParameters` object, a dictionary of run keys,
            or a callable returning either of them. |br|
            Any other file is read as a flat ``key = value`` text file, with ``#`` starting a comment.
        """
        path = Path(path)
        if path.suffix != '.py':
            return cls(**cls._read_flat(path))

        try:
            spec = importlib.util.spec_from_file_location('assignflow.cfg', path)
            cfg = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(cfg)
        except OSError:
            raise
        except Exception as err:
            raise ImportError(f'Failed to import the file [{path}]: {err!r}') from err

        try:
            params = getattr(cfg, variable)
        except AttributeError as err:
            raise AttributeError(f'Configuration variable [{variable}] not found in file [{path}]') from err

        if callable(params):
            params = params(**kwargs)

        if isinstance(params, cls):
            return params
        elif isinstance(params, dict):
            return cls(**params)
        else:
            raise TypeError(
                f'Unknown type for configuration variable {variable} [{type(params).__name__}]. This variable should be a dictionary or assignflow.engine.HyperParameters object.'
            )

    @staticmethod
    def _read_flat(path):
        values = {}
        with open(path, 'r') as f:
            for lineno, line in enumerate(f, 1):
                line = line.split('#', 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition('=')
                if not sep:
                    raise ValueError(f'{path}:{lineno}: expected "key = value" [{line}]')
                values[key.strip()] = value.strip()
        return values

    def save(self, filename):
        """ Write all serializable run keys to a flat ``key = value`` text file. """
        with open(filename, 'w') as f:
            for key in RUN_KEYS:
                value = getattr(self, key)
                if value is not None and key not in self.__no_serialize:
                    f.write(f'{key} = {_format(value)}\n')

    def update(self, **kwargs):
        """ Override run keys, ignoring values that are ``None``. CLI flags use this on top of a configuration file. """
        for key, value in kwargs.items():
            if value is not None:
                self.set(key, value)
        self.validate()

    def train_config(self):
        """ Frozen :class:`TrainConfig` view of the training keys. """
        return TrainConfig(
            eps=self.eps,
            batch_size=self.batch_size,
            steps=self.steps,
            lr=self.lr,
            lr_schedule=self.lr_schedule,
            seed=self.seed,
            variant=self.variant,
            hidden=self.hidden,
            bias=self.bias,
            deterministic=self.deterministic,
        )

    def integrator_config(self, direction='forward'):
        """ Frozen :class:`~assignflow.flow.IntegratorConfig` view of the integration keys. """
        return IntegratorConfig(scheme=self.scheme, steps=self.integration_steps, direction=direction)

    @property
    def optimizer(self):
        """ Convenience property to access the first optimizer. """
        return self.optimizers[0]

    @property
    def scheduler(self):
        """ Convenience property to access the first scheduler. """
        return self.schedulers[0]

    def add_optimizer(self, optimizer):
        if self.optimizers is None:
            self.optimizers = [optimizer]
        else:
            self.optimizers.append(optimizer)

    def add_scheduler(self, scheduler):
        if self.schedulers is None:
            self.schedulers = [scheduler]
        else:
            self.schedulers.append(scheduler)

    def __repr__(self):
        keys = ', '.join(f'{key}={getattr(self, key)!r}' for key in RUN_KEYS)
        return f'{self.__class__.__name__}({keys})'
