# -*- coding: utf-8 -*-

import logging
import numpy as np

from ta3n.autodiff.tape import Tape
from ta3n.autodiff.tape import AutodiffError
from ta3n.autodiff.tape import backward
from ta3n.autodiff.tape import zero_grad


logger = logging.getLogger(__name__)

MAX_EPSILON = 1e-2


def finite_difference_check(loss_fn, params, epsilon=1e-6,
                            max_coordinates=None, seed=0):
    """Compares backward() gradients to central differences

    `loss_fn(tape)` must build a scalar loss on the tape it is given
    using the current values of `params`.  Perturbed evaluations run on
    tapes that replay the stop-gradient values of the base evaluation
    and let gradients pass straight through reversal nodes, so the
    analytic gradient is the exact gradient of the evaluated function.
    The `grad` of every parameter is restored on return.

    :param loss_fn: callable taking a Tape, returning a scalar value
    :param params: list of parameter DifferentiableValue objects
    :param epsilon: central difference step, in (0, 1e-2]
    :param max_coordinates: if set, number of coordinates sampled per
                            parameter, otherwise every coordinate
    :param seed: seed used to sample coordinates
    :returns: max over checked coordinates of
              |analytic - numeric| / max(1, |numeric|)
    :raises AutodiffError: if epsilon is outside (0, 1e-2]
    """
    if epsilon <= 0 or epsilon > MAX_EPSILON:
        raise AutodiffError('epsilon must be in (0, ' + str(MAX_EPSILON) +
                            '], got ' + str(epsilon))
    saved = [p.grad.copy() for p in params]
    zero_grad(params)
    base_tape = Tape(reverse_gradients=False)
    loss = loss_fn(base_tape)
    backward(loss)
    replay = list(base_tape.get_detached_values())
    analytic = [p.grad.copy() for p in params]

    def _evaluate():
        return float(loss_fn(Tape(reverse_gradients=False,
                                  replay=replay)).values)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, grad in zip(params, analytic):
        flat = p.values.reshape(-1)
        if max_coordinates is None or max_coordinates >= flat.size:
            coords = np.arange(flat.size)
        else:
            coords = rng.choice(flat.size, size=max_coordinates,
                                replace=False)
        for c in coords:
            original = flat[c]
            flat[c] = original + epsilon
            plus = _evaluate()
            flat[c] = original - epsilon
            minus = _evaluate()
            flat[c] = original
            numeric = (plus - minus) / (2.0 * epsilon)
            error = abs(grad.reshape(-1)[c] - numeric) / max(1.0,
                                                            abs(numeric))
            if error > worst:
                worst = error
    logger.debug('Finite difference check max relative error ' + str(worst))
    for p, grad in zip(params, saved):
        p.grad = grad
    return worst
