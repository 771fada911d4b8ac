# -*- coding: utf-8 -*-

import logging
import itertools
import numpy as np


logger = logging.getLogger(__name__)

# full enumeration when C(K, n) is at most this, else seeded sampling
DEFAULT_MAX_SUBSETS_PER_SCALE = 32


class RelationError(Exception):
    """Exception to denote invalid relation scale or subset
    """
    pass


class RelationSubset(object):
    """Time ordered frame indices feeding one n-frame relation
    """

    def __init__(self, indices, subset_id=0):
        """Constructor

        :raises RelationError: if indices are not strictly increasing
        """
        indices = tuple(int(i) for i in indices)
        for a, b in zip(indices, indices[1:]):
            if b <= a:
                raise RelationError('Subset indices must be strictly '
                                    'increasing: ' + str(indices))
        self._indices = indices
        self._subset_id = subset_id

    def get_indices(self):
        return self._indices

    def get_scale(self):
        return len(self._indices)

    def get_subset_id(self):
        return self._subset_id

    def __eq__(self, other):
        return (isinstance(other, RelationSubset) and
                self._indices == other._indices)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self._indices)

    def __repr__(self):
        return 'RelationSubset(' + str(self._indices) + ')'


def enumerate_subsets(num_frames, scale,
                      max_per_scale=DEFAULT_MAX_SUBSETS_PER_SCALE, seed=0):
    """Gets the time ordered frame subsets used at relation `scale`

    All C(num_frames, scale) increasing tuples are returned when there
    are at most `max_per_scale` of them, otherwise `max_per_scale`
    distinct tuples drawn uniformly without replacement with a
    generator seeded by (seed, num_frames, scale).  Tuples come back in
    lexicographic order.

    :raises RelationError: if scale is outside [2, num_frames]
    """
    if scale < 2 or scale > num_frames:
        raise RelationError('Relation scale must be in [2, ' +
                            str(num_frames) + '], got ' + str(scale))
    combos = list(itertools.combinations(range(num_frames), scale))
    if len(combos) > max_per_scale:
        rng = np.random.default_rng([seed, num_frames, scale])
        chosen = rng.choice(len(combos), size=max_per_scale, replace=False)
        combos = [combos[i] for i in sorted(chosen)]
    return [RelationSubset(c, subset_id=m) for m, c in enumerate(combos)]


def temporal_pool(tape, features):
    """Mean over the frame axis of K x F or B x K x F features

    :raises RelationError: if there are no frames
    """
    if features.shape[-2] < 1:
        raise RelationError('temporal_pool needs at least one frame')
    return tape.mean_axis(features, axis=features.values.ndim - 2)


def temporal_relation(tape, features, scale, subsets, relation_mlp):
    """Sums g_phi(n) over all frame subsets of one scale

    For every subset the n frame features are concatenated in time
    order and passed through `relation_mlp`; results are summed over
    subsets.

    :param features: K x F or B x K x F DifferentiableValue
    :param scale: relation scale n
    :param subsets: list of RelationSubset, all of scale n
    :param relation_mlp: Mlp mapping n*F to F
    :returns: F vector, or B x F for batched input
    :raises RelationError: on scale mismatch or index >= K
    """
    single = features.values.ndim == 2
    if single:
        features = tape.reshape(features, (1,) + features.shape)
    batch, num_frames, dim = features.shape
    indices = []
    for subset in subsets:
        if subset.get_scale() != scale:
            raise RelationError('Subset ' + str(subset) +
                                ' does not have scale ' + str(scale))
        if subset.get_indices()[-1] >= num_frames:
            raise RelationError('Subset ' + str(subset) +
                                ' indexes beyond ' + str(num_frames) +
                                ' frames')
        indices.extend(subset.get_indices())
    gathered = tape.take(features, indices, axis=1)
    grouped = tape.reshape(gathered, (batch, len(subsets), scale * dim))
    related = relation_mlp.forward(tape, grouped)
    summed = tape.sum_axis(related, axis=1)
    if single:
        return tape.reshape(summed, (summed.shape[-1],))
    return summed
