# -*- coding: utf-8 -*-

"""Loss terms of the adversarial objective and their weighted sum

Domain labels are 0 for source and 1 for target.  Class labels of
unlabeled videos are -1.  The adversarial sign of every domain term is
carried by the gradient reversal nodes in front of the
discriminators, so every term here is a plain minimized cross-entropy.
"""

import logging
from collections import OrderedDict
import numpy as np

from ta3n.autodiff.functional import cross_entropy
from ta3n.autodiff.functional import entropy_from_logits


logger = logging.getLogger(__name__)

SOURCE_DOMAIN = 0
TARGET_DOMAIN = 1
UNLABELED = -1


class LossError(Exception):
    """base exception class for loss computation errors
    """
    pass


class EmptySourceBatchError(LossError):
    """Exception to denote a batch without any labeled video
    """
    pass


class MissingScaleError(LossError):
    """Exception to denote relation discriminator outputs are missing
       for some scale
    """
    pass


class LossWeights(object):
    """Weights lambda_s, lambda_r, lambda_t and gamma
    """

    def __init__(self, lambda_s=0.0, lambda_r=0.0, lambda_t=0.0, gamma=0.0):
        """Constructor

        :raises LossError: if any weight is negative
        """
        self.lambda_s = float(lambda_s)
        self.lambda_r = float(lambda_r)
        self.lambda_t = float(lambda_t)
        self.gamma = float(gamma)
        for name, value in self.as_dict().items():
            if value < 0 or not np.isfinite(value):
                raise LossError(name + ' must be a nonnegative number, got ' +
                                str(value))

    def as_tuple(self):
        return (self.lambda_s, self.lambda_r, self.lambda_t, self.gamma)

    def as_dict(self):
        return OrderedDict([('lambda_s', self.lambda_s),
                            ('lambda_r', self.lambda_r),
                            ('lambda_t', self.lambda_t),
                            ('gamma', self.gamma)])

    def is_source_only(self):
        return not any(self.as_tuple())


class LossBreakdown(object):
    """Components of one evaluation of the objective

    Components that were not computed (discriminator disabled, or term
    absent from the baseline objective) are None.
    """

    def __init__(self, weights):
        self.weights = weights
        self.pred = None
        self.spatial = None
        self.temporal = None
        self.relation = None
        self.attentive_entropy = None
        self.total = None

    def get_component_values(self):
        """Gets OrderedDict of component name -> float, 0.0 when absent
        """
        values = OrderedDict()
        for name in ('pred', 'spatial', 'relation', 'temporal',
                     'attentive_entropy', 'total'):
            value = getattr(self, name)
            values[name] = 0.0 if value is None else float(value.values)
        return values

    def is_finite(self):
        values = self.get_component_values().values()
        return all(np.isfinite(v) for v in values)


def _domain_array(domain_labels):
    return np.asarray(domain_labels, dtype=np.int64)


def _batch_mean(tape, per_video):
    return tape.mean_axis(per_video, axis=0)


def prediction_loss(tape, class_logits, labels):
    """Mean cross-entropy over the labeled videos of the batch

    :param class_logits: B x C logits
    :param labels: B class indices, -1 for unlabeled videos
    :raises EmptySourceBatchError: if no video carries a label
    """
    labels = np.asarray(labels, dtype=np.int64)
    labeled = np.flatnonzero(labels != UNLABELED)
    if labeled.size == 0:
        raise EmptySourceBatchError('Batch of ' + str(labels.size) +
                                    ' videos has no labeled video')
    picked = tape.take(class_logits, labeled, axis=0)
    return _batch_mean(tape, cross_entropy(tape, picked, labels[labeled]))


def spatial_domain_loss(tape, per_frame_domain_logits, domain_labels):
    """Per video mean over its K frame predictions, then batch mean

    :param per_frame_domain_logits: (B*K) x 2, frames of a video adjacent
    :param domain_labels: B domain labels
    """
    domains = _domain_array(domain_labels)
    batch = domains.size
    num_frames = per_frame_domain_logits.shape[0] // batch
    per_frame = cross_entropy(tape, per_frame_domain_logits,
                              np.repeat(domains, num_frames))
    per_video = tape.mean_axis(tape.reshape(per_frame, (batch, num_frames)),
                               axis=1)
    return _batch_mean(tape, per_video)


def temporal_domain_loss(tape, temporal_domain_logits, domain_labels):
    """Batch mean of the video level domain cross-entropy
    """
    return _batch_mean(tape, cross_entropy(tape, temporal_domain_logits,
                                           _domain_array(domain_labels)))


def relation_domain_loss(tape, per_scale_domain_logits, domain_labels,
                         num_frames=None):
    """Mean over scales of the per-scale domain cross-entropy

    :param per_scale_domain_logits: list of B x 2, one per scale 2..K
    :param num_frames: K, when given exactly K-1 scales are required
    :raises MissingScaleError: if the scale count is wrong or zero
    """
    count = len(per_scale_domain_logits)
    if count == 0:
        raise MissingScaleError('No relation discriminator outputs')
    if num_frames is not None and count != num_frames - 1:
        raise MissingScaleError('Expected ' + str(num_frames - 1) +
                                ' relation scales, got ' + str(count))
    total = None
    for logits in per_scale_domain_logits:
        term = temporal_domain_loss(tape, logits, domain_labels)
        total = term if total is None else tape.add(total, term)
    return tape.scale(total, 1.0 / count)


def attentive_entropy_loss(tape, temporal_domain_logits, class_logits):
    """Batch mean of (1 + H(d)) * H(y) with H(d) held constant

    Without a temporal discriminator the factor is 1.
    """
    class_entropy = entropy_from_logits(tape, class_logits, axis=-1)
    if temporal_domain_logits is None:
        return _batch_mean(tape, class_entropy)
    domain_entropy = tape.detach(
        entropy_from_logits(tape, temporal_domain_logits, axis=-1))
    factor = tape.add(domain_entropy, tape.constant(1.0))
    return _batch_mean(tape, tape.multiply(factor, class_entropy))


def total_loss(tape, outputs, labels, domain_labels, weights,
               num_frames=None, attentive_entropy=True):
    """Builds every available component and their weighted sum

    total = L_y + gamma L_ae + lambda_s L_sd + lambda_r L_rd + lambda_t L_td

    The lambda_r term is present only when `outputs` carries relation
    domain logits, so the TemPooling baseline of lambda_s and lambda_t
    follows from the model.  With `attentive_entropy` False the gamma
    term is absent.  A term with zero weight is reported but not added
    to the total.

    :param outputs: ForwardOutputs of the batch
    :param weights: LossWeights
    :returns: LossBreakdown
    """
    breakdown = LossBreakdown(weights)
    breakdown.pred = prediction_loss(tape, outputs.class_logits, labels)
    terms = []
    if outputs.spatial_domain_logits is not None:
        breakdown.spatial = spatial_domain_loss(
            tape, outputs.spatial_domain_logits, domain_labels)
        terms.append((weights.lambda_s, breakdown.spatial))
    if outputs.temporal_domain_logits is not None:
        breakdown.temporal = temporal_domain_loss(
            tape, outputs.temporal_domain_logits, domain_labels)
        terms.append((weights.lambda_t, breakdown.temporal))
    if len(outputs.relation_domain_logits) > 0:
        breakdown.relation = relation_domain_loss(
            tape, outputs.relation_domain_logits, domain_labels,
            num_frames=num_frames)
        terms.append((weights.lambda_r, breakdown.relation))
    if attentive_entropy:
        breakdown.attentive_entropy = attentive_entropy_loss(
            tape, outputs.temporal_domain_logits, outputs.class_logits)
        terms.append((weights.gamma, breakdown.attentive_entropy))

    total = breakdown.pred
    for weight, term in terms:
        if weight > 0:
            total = tape.add(total, tape.scale(term, weight))
    breakdown.total = total
    return breakdown
