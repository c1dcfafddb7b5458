# -*- coding: utf-8 -*-
"""
Assignflow Models Module |br|
This module contains the fitness functions that can be trained with this library.
"""

from ._network_linear import *
from ._network_mlp import *
from ._build import *
