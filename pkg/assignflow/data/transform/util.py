# -*- coding: utf-8 -*-
#
#   Base classes of the configuration transforms
#

from abc import ABC, abstractmethod

__all__ = ['Compose', 'BaseTransform']


class Compose(list):
    """ Pipeline of transforms, applied in list order.

    Example:
        >>> data = torch.tensor([[0, 1], [1, 1]])
        >>> tf = af.data.transform.Compose([af.data.transform.GeodesicTuple(2, generator=torch.Generator().manual_seed(0))])
        >>> tf.append(lambda batch: batch.W_t)
        >>> tf(data).shape
        torch.Size([2, 2, 2])
    """

    def __call__(self, data):
        for tf in self:
            data = tf(data)
        return data

    def __repr__(self):
        body = ''.join(f'\n  {tf!r}' for tf in self)
        return f'{self.__class__.__name__} [{body}\n]'


class BaseTransform(ABC):
    """ Transform with fixed settings.

    The keyword arguments of ``__init__`` become the settings of the object and are passed to :meth:`apply` on every call.
    Other attributes, like statistics of the last call, are not.
    """

    def __init__(self, **settings):
        self._settings = tuple(settings)
        for key, value in settings.items():
            setattr(self, key, value)

    @property
    def settings(self):
        return {key: getattr(self, key) for key in self._settings}

    def __call__(self, data):
        return self.apply(data, **self.settings)

    def __repr__(self):
        args = ', '.join(f'{k}={v!r}' for k, v in self.settings.items())
        return f'{self.__class__.__name__}({args})'

    @classmethod
    @abstractmethod
    def apply(cls, data, **settings):
        """ Transform ``data`` once, with the same keyword arguments as ``__init__``. """
        return data
