# -*- coding: utf-8 -*-

import logging
import numpy as np


logger = logging.getLogger(__name__)

SOURCE = 'source'
TARGET = 'target'
DOMAINS = [SOURCE, TARGET]


class DataError(Exception):
    """base exception class for dataset problems
    """
    pass


class FeatureFileError(DataError):
    """Exception to denote a malformed feature file

    `record_id` holds the video id of the offending record or None
    when the problem is in the manifest itself.
    """
    def __init__(self, message, record_id=None):
        if record_id is not None:
            message = message + ' (record ' + str(record_id) + ')'
        super(FeatureFileError, self).__init__(message)
        self.record_id = record_id


class SyntheticSpecError(DataError):
    """Exception to denote a degenerate synthetic data specification
    """
    pass


class FrameCountError(DataError):
    """Exception to denote a video has fewer frames than requested
    """
    pass


def domain_index(domain):
    """0 for source, 1 for target

    :raises DataError: for any other value
    """
    try:
        return DOMAINS.index(domain)
    except ValueError:
        raise DataError('Unknown domain ' + str(domain) +
                        ' expected one of ' + str(DOMAINS))


class FrameFeatureRecord(object):
    """One video: T time ordered frame feature vectors plus tags
    """

    def __init__(self, video_id, domain, label, frames):
        """Constructor

        :param video_id: unique string id
        :param domain: 'source' or 'target'
        :param label: class index or None when unknown
        :param frames: T x D array
        :raises DataError: if frames are not a finite 2-D array
        """
        self._video_id = str(video_id)
        domain_index(domain)
        self._domain = domain
        self._label = None if label is None else int(label)
        frames = np.asarray(frames, dtype=np.float64)
        if frames.ndim != 2:
            raise DataError('Frames of ' + self._video_id +
                            ' must be T x D, got shape ' + str(frames.shape))
        if not np.all(np.isfinite(frames)):
            raise DataError('Frames of ' + self._video_id +
                            ' contain non finite values')
        self._frames = frames

    def get_video_id(self):
        return self._video_id

    def get_domain(self):
        return self._domain

    def get_domain_index(self):
        return domain_index(self._domain)

    def get_label(self):
        return self._label

    def get_frames(self):
        return self._frames

    def get_num_frames(self):
        return self._frames.shape[0]

    def get_feature_dim(self):
        return self._frames.shape[1]

    def with_frames(self, frames):
        """Copy of this record holding `frames` instead
        """
        return FrameFeatureRecord(self._video_id, self._domain, self._label,
                                  frames)

    def __repr__(self):
        return ('FrameFeatureRecord(' + self._video_id + ', ' +
                self._domain + ', label=' + str(self._label) +
                ', T=' + str(self.get_num_frames()) + ')')


class DomainDataset(object):
    """Immutable ordered collection of FrameFeatureRecord objects
       sharing one feature dimension
    """

    def __init__(self, records, feature_dim=None, class_names=None):
        """Constructor

        :param feature_dim: D, taken from the first record if None
        :param class_names: list of class names, index = label
        :raises DataError: if records disagree on D or a label is out
                           of range of class_names
        """
        self._records = tuple(records)
        if feature_dim is None:
            if len(self._records) == 0:
                raise DataError('feature_dim is required for an empty '
                                'dataset')
            feature_dim = self._records[0].get_feature_dim()
        self._feature_dim = int(feature_dim)
        self._class_names = list(class_names or [])
        for record in self._records:
            if record.get_feature_dim() != self._feature_dim:
                raise DataError('Record ' + record.get_video_id() +
                                ' has dimension ' +
                                str(record.get_feature_dim()) +
                                ' expected ' + str(self._feature_dim))
            label = record.get_label()
            if label is not None and self._class_names and \
                    (label < 0 or label >= len(self._class_names)):
                raise DataError('Record ' + record.get_video_id() +
                                ' has label ' + str(label) + ' outside ' +
                                str(len(self._class_names)) + ' classes')

    def get_records(self):
        return self._records

    def get_feature_dim(self):
        return self._feature_dim

    def get_class_names(self):
        return list(self._class_names)

    def get_num_classes(self):
        """Number of class names, or largest label + 1 without names
        """
        if self._class_names:
            return len(self._class_names)
        labels = [r.get_label() for r in self._records
                  if r.get_label() is not None]
        return max(labels) + 1 if labels else 0

    def is_labeled(self):
        return len(self._records) > 0 and \
            all(r.get_label() is not None for r in self._records)

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)


def frame_indices(num_frames, k_frames):
    """Equally spaced indices round(j (T - 1) / (K - 1)), j = 0..K-1

    Ties round half up.

    :raises FrameCountError: if num_frames < k_frames or k_frames < 2
    """
    if k_frames < 2:
        raise FrameCountError('Need at least 2 sampled frames, got ' +
                              str(k_frames))
    if num_frames < k_frames:
        raise FrameCountError('Cannot sample ' + str(k_frames) +
                              ' frames from ' + str(num_frames))
    positions = np.arange(k_frames) * (num_frames - 1) / float(k_frames - 1)
    return np.floor(positions + 0.5).astype(np.int64)


def sample_frames(record, k_frames):
    """Gets K x D equally spaced frames of `record` in time order

    :raises FrameCountError: naming the video if T < K
    """
    try:
        indices = frame_indices(record.get_num_frames(), k_frames)
    except FrameCountError as e:
        raise FrameCountError('Video ' + record.get_video_id() + ': ' +
                              str(e))
    return record.get_frames()[indices]


def stack_frames(records, k_frames, hide_labels=False):
    """Samples K frames of every record

    :param hide_labels: if True labels come back as -1
    :returns: tuple (B x K x D frames, B labels, B domain indices)
              with -1 for unknown labels
    """
    frames = np.stack([sample_frames(r, k_frames) for r in records])
    labels = np.array([-1 if hide_labels or r.get_label() is None
                       else r.get_label() for r in records], dtype=np.int64)
    domains = np.array([r.get_domain_index() for r in records],
                       dtype=np.int64)
    return frames, labels, domains
