# -*- coding: utf-8 -*-
#
#   Flow matching losses
#

from ._rcfm import *
