# -*- coding: utf-8 -*-
"""
Assignflow Data Module |br|
This module contains everything related to configuration datasets:
loading and saving the text formats, synthetic target distributions,
dataloading for training and the pre- and post-processing transforms.
"""

from ._dataloading import *
from ._io import *
from . import targets
from . import transform
