# -*- coding: utf-8 -*-
"""
Assignflow Engine Module |br|
This module contains the run configuration and the classes and functions that orchestrate the training of fitness fields.
"""

from ._parameter import *
from ._engine import *
from ._train import *
