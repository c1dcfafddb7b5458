# -*- coding: utf-8 -*-
"""
Assignflow Geometry Module |br|
This module contains the closed-form Fisher-Rao geometry of the probability simplex and the assignment manifold,
together with the embedding of the assignment manifold into the meta-simplex of all joint distributions.

Every function works on ``torch.float64`` tensors with the category axis last.
Assignment states have shape ``(..., n, c)``, so that batches of states can be processed at once.
"""

from ._simplex import *
from ._geodesic import *
from ._meta import *
