# -*- coding: utf-8 -*-
"""
Assignflow Network Module |br|
This module contains the building blocks for parametrized fitness functions :math:`F_\\theta`,
their checkpoint format and the flow-matching loss they are trained with.
"""

from . import loss
from . import module
