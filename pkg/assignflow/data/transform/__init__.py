# -*- coding: utf-8 -*-
"""
Assignflow Transforms |br|
Pre-processing turns batches of configurations into training tuples on conditional e-geodesics,
post-processing rounds assignment states to configurations.
"""

from .util import *
from ._preprocess import *
from ._postprocess import *
