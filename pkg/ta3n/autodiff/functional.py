# -*- coding: utf-8 -*-

import logging
import numpy as np

from ta3n.autodiff.tape import AutodiffError
from ta3n.autodiff.tape import LabelRangeError
from ta3n.autodiff.ops import LN2


logger = logging.getLogger(__name__)


class GrlConfig(object):
    """Reversal strength of gradient reversal nodes

    The model holds one instance; the trainer updates its
    strength every step following the ramp schedule.
    """

    def __init__(self, lambda_grl=1.0):
        """Constructor

        :raises AutodiffError: if lambda_grl is negative
        """
        self._lambda_grl = None
        self.set_lambda(lambda_grl)

    def get_lambda(self):
        return self._lambda_grl

    def set_lambda(self, lambda_grl):
        if lambda_grl < 0:
            raise AutodiffError('lambda_grl must be nonnegative, got ' +
                                str(lambda_grl))
        self._lambda_grl = float(lambda_grl)


def grl(tape, x, cfg):
    """Gradient reversal: identity on the forward pass, upstream
       gradient is -cfg.get_lambda() times the incoming gradient
    """
    return tape.forward_op('grl', [x], lambda_grl=cfg.get_lambda())


def entropy(tape, p, axis=-1):
    """Base-2 entropy of probability vector(s) `p` along `axis`
    """
    return tape.forward_op('entropy', [p], axis=axis)


def entropy_from_logits(tape, logits, axis=-1):
    """Base-2 entropy of softmax(logits) along `axis`

    Uses log_softmax so confident predictions never hit log(0).
    """
    probs = tape.softmax(logits, axis=axis)
    log_probs = tape.log_softmax(logits, axis=axis)
    plogp = tape.multiply(probs, log_probs)
    return tape.scale(tape.sum_axis(plogp, axis=axis), -1.0 / LN2)


def one_hot(labels, num_classes):
    """Returns float one-hot matrix for integer `labels`

    :raises LabelRangeError: if any label is outside [0, num_classes)
    """
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size > 0 and (labels.min() < 0 or
                            labels.max() >= num_classes):
        raise LabelRangeError('Label out of range [0, ' +
                              str(num_classes) + '): ' + str(labels))
    encoded = np.zeros(labels.shape + (num_classes,), dtype=np.float64)
    if labels.ndim == 0:
        encoded[labels] = 1.0
    else:
        encoded[np.arange(labels.shape[0]), labels] = 1.0
    return encoded


def cross_entropy(tape, logits, labels):
    """-log softmax(logits)[label] with log-sum-exp stabilization

    :param logits: C vector or N x C matrix
    :param labels: int, or N int array for a matrix
    :returns: scalar for a vector input, N vector for a matrix input
    :raises LabelRangeError: if a label is out of range
    """
    num_classes = logits.shape[-1]
    encoded = tape.constant(one_hot(labels, num_classes))
    log_probs = tape.log_softmax(logits, axis=-1)
    picked = tape.sum_axis(tape.multiply(log_probs, encoded), axis=-1)
    return tape.scale(picked, -1.0)
