# -*- coding: utf-8 -*-

import logging
import numpy as np


logger = logging.getLogger(__name__)


def _check_progress(p):
    if p < 0 or p > 1:
        raise ValueError('progress must be in [0, 1], got ' + str(p))


def lr_schedule(p, lr0=0.03, alpha=10.0, beta=0.75):
    """lr0 / (1 + alpha p) ** beta
    """
    _check_progress(p)
    return lr0 / (1.0 + alpha * p) ** beta


def grl_lambda_schedule(p, ramp=10.0):
    """2 / (1 + exp(-ramp p)) - 1, rising from 0 towards 1
    """
    _check_progress(p)
    return 2.0 / (1.0 + np.exp(-ramp * p)) - 1.0
