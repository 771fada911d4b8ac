# -*- coding: utf-8 -*-

import logging

from ta3n.autodiff.functional import entropy_from_logits


logger = logging.getLogger(__name__)

SUM = 'sum'
MEAN = 'mean'


class AttentionError(Exception):
    """Exception to denote mismatched attention inputs
    """
    pass


def domain_attention_weight(tape, domain_logits):
    """1 - H(softmax(domain_logits)) with base-2 entropy

    The result is a stop-gradient node: the weight acts as a constant
    during backward.

    :param domain_logits: 2 vector or N x 2 discriminator logits
    :returns: scalar or N vector in [0, 1]
    """
    h = entropy_from_logits(tape, domain_logits, axis=-1)
    weight = tape.add(tape.constant(1.0), tape.scale(h, -1.0))
    return tape.detach(weight)


def stack_features(tape, features):
    """Stacks a list of B x F values into B x S x F
    """
    expanded = [tape.reshape(f, (f.shape[0], 1, f.shape[1]))
                for f in features]
    return tape.concat(expanded, axis=1)


def attend_and_aggregate(tape, stacked, weights, reduce=SUM):
    """Residual attention aggregation sum_s (w_s + 1) * feature_s

    :param stacked: S x F or B x S x F features
    :param weights: S or B x S weights
    :param reduce: SUM over scales, or MEAN for attended frame pooling
    :returns: F or B x F
    :raises AttentionError: if weights and features disagree on S
    """
    scale_axis = stacked.values.ndim - 2
    if weights.shape != stacked.shape[:-1]:
        raise AttentionError('Expected attention weights of shape ' +
                             str(stacked.shape[:-1]) + ' got ' +
                             str(weights.shape))
    multiplier = tape.add(weights, tape.constant(1.0))
    multiplier = tape.reshape(multiplier, weights.shape + (1,))
    attended = tape.multiply(stacked, multiplier)
    if reduce == MEAN:
        return tape.mean_axis(attended, axis=scale_axis)
    return tape.sum_axis(attended, axis=scale_axis)


def general_attention(tape, stacked, attention_mlp):
    """FC-Tanh-FC-Softmax weights over scales

    :param stacked: B x S x F features
    :param attention_mlp: Mlp F -> hidden -> 1 with tanh activation
    :returns: B x S weights, each row summing to 1
    """
    scores = attention_mlp.forward(tape, stacked)
    scores = tape.reshape(scores, stacked.shape[:-1])
    return tape.softmax(scores, axis=-1)
