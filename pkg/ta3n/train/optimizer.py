# -*- coding: utf-8 -*-

import logging
import numpy as np


logger = logging.getLogger(__name__)


class OptimizerError(Exception):
    """Exception to denote parameters and optimizer state disagree
    """
    pass


class OptimizerState(object):
    """Velocity buffer per parameter plus step accounting
    """

    def __init__(self, params, total_steps=1):
        """Constructor

        :param params: list of parameter DifferentiableValue objects
        :param total_steps: steps of the whole run, used for progress
        """
        self._velocity = [np.zeros_like(p.values) for p in params]
        self._step = 0
        self._total_steps = max(1, int(total_steps))

    def get_velocity(self):
        return self._velocity

    def get_step(self):
        return self._step

    def get_total_steps(self):
        return self._total_steps

    def get_progress(self):
        """completed steps / total steps, clipped to [0, 1]
        """
        return min(1.0, self._step / float(self._total_steps))

    def advance(self):
        self._step += 1


def sgd_step(params, state, lr, momentum=0.9, weight_decay=1e-4):
    """v = momentum v + grad + weight_decay param; param -= lr v

    Gradients are read from each parameter's `grad`.

    :raises OptimizerError: if a parameter and its velocity or
                            gradient disagree in shape
    """
    velocity = state.get_velocity()
    if len(velocity) != len(params):
        raise OptimizerError('Optimizer holds ' + str(len(velocity)) +
                             ' buffers for ' + str(len(params)) +
                             ' parameters')
    for index, p in enumerate(params):
        v = velocity[index]
        if v.shape != p.values.shape or p.grad.shape != p.values.shape:
            raise OptimizerError('Shape mismatch for ' + str(p.get_name()) +
                                 ': parameter ' + str(p.values.shape) +
                                 ' velocity ' + str(v.shape) +
                                 ' grad ' + str(p.grad.shape))
        v = momentum * v + p.grad + weight_decay * p.values
        velocity[index] = v
        p.values = p.values - lr * v
    state.advance()
