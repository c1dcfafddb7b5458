# -*- coding: utf-8 -*-
#
#   Fitness field modules
#

from ._field import *
from ._checkpoint import *
