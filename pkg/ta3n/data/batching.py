# -*- coding: utf-8 -*-

import logging
import numpy as np

from ta3n.data.record import DataError
from ta3n.data.record import stack_frames


logger = logging.getLogger(__name__)

LABELED_STREAM = 0
UNLABELED_STREAM = 1


def target_batch_size(source_batch, source_count, target_count):
    """round(source_batch * target_count / source_count), halves up,
       at least 1
    """
    if source_count < 1:
        raise DataError('Source dataset is empty')
    size = (2 * source_batch * target_count + source_count) // \
        (2 * source_count)
    return max(1, int(size))


def batches_per_epoch(source_count, source_batch):
    return int(np.ceil(source_count / float(source_batch)))


class MixedBatch(object):
    """Labeled videos followed by unlabeled videos of one step

    Labels of the unlabeled part are never exposed.
    """

    def __init__(self, labeled, unlabeled, epoch=0, index=0):
        self._labeled = list(labeled)
        self._unlabeled = list(unlabeled)
        self._epoch = epoch
        self._index = index

    def get_epoch(self):
        return self._epoch

    def get_index(self):
        return self._index

    def get_labeled_count(self):
        return len(self._labeled)

    def get_unlabeled_count(self):
        return len(self._unlabeled)

    def get_video_ids(self):
        return [r.get_video_id() for r in self._labeled + self._unlabeled]

    def get_arrays(self, k_frames):
        """Gets (B x K x D frames, B labels, B domains)

        Unlabeled videos carry label -1.
        """
        frames, labels, domains = stack_frames(self._labeled, k_frames)
        if len(self._unlabeled) == 0:
            return frames, labels, domains
        u_frames, u_labels, u_domains = stack_frames(self._unlabeled,
                                                     k_frames,
                                                     hide_labels=True)
        return (np.concatenate([frames, u_frames]),
                np.concatenate([labels, u_labels]),
                np.concatenate([domains, u_domains]))


class _CyclingOrder(object):
    """Endless shuffled pass over `count` items, reshuffled on wrap
    """

    def __init__(self, count, rng):
        self._count = count
        self._rng = rng
        self._order = rng.permutation(count)
        self._position = 0

    def take(self, size):
        picked = []
        while len(picked) < size:
            if self._position == self._count:
                self._order = self._rng.permutation(self._count)
                self._position = 0
            picked.append(int(self._order[self._position]))
            self._position += 1
        return picked


def make_batches(source, target, source_batch, seed, epoch=0):
    """Yields the MixedBatch objects of one epoch

    Every labeled (source) video appears exactly once per epoch.
    Unlabeled (target) videos are drawn from a shuffled order that
    restarts, reshuffled, whenever it runs out.  A batch of m labeled
    videos draws target_batch_size(m, ...) unlabeled ones, so a short
    final batch keeps the labeled to unlabeled ratio.  Both orders come from
    generators seeded by (seed, epoch) and are independent of each
    other, so the labeled stream does not depend on `target`.

    :param source: labeled DomainDataset
    :param target: unlabeled DomainDataset, or None
    :raises DataError: if source is empty or source_batch < 1
    """
    if source is None or len(source) == 0:
        raise DataError('Labeled dataset is empty')
    if source_batch < 1:
        raise DataError('source_batch must be at least 1')
    source_records = source.get_records()
    order = np.random.default_rng([seed, epoch, LABELED_STREAM]).permutation(
        len(source_records))
    target_cycle = None
    if target is not None and len(target) > 0:
        target_cycle = _CyclingOrder(
            len(target), np.random.default_rng([seed, epoch,
                                                UNLABELED_STREAM]))
    target_records = [] if target_cycle is None else target.get_records()
    for index, start in enumerate(range(0, len(order), source_batch)):
        labeled = [source_records[i] for i in order[start:start +
                                                    source_batch]]
        unlabeled = []
        if target_cycle is not None:
            size = target_batch_size(len(labeled), len(source),
                                     len(target))
            unlabeled = [target_records[i] for i in target_cycle.take(size)]
        yield MixedBatch(labeled, unlabeled, epoch=epoch, index=index)
