# -*- coding: utf-8 -*-
#
#   Assignflow : Generative models of discrete joint distributions by flow matching on the assignment manifold
#

__all__ = ['geometry', 'network', 'models', 'data', 'flow', 'engine', 'errors']


try:
    from ._version import __version__
except ImportError:
    __version__ = '0.0.0'

from .log import *

from . import errors
from . import geometry
from . import network
from . import models
from . import data
from . import flow
from . import engine
