# -*- coding: utf-8 -*-
"""
Assignflow Flow Module |br|
This module integrates learned assignment flows in tangent coordinates,
samples discrete configurations from them and bounds configuration log-likelihoods.
"""

from ._integrate import *
from ._likelihood import *
