# -*- coding: utf-8 -*-

"""Synthetic cross-domain video features

Classes come in pairs.  Both classes of a pair follow the same latent
trajectory, one forward in time and one reversed, so the pair can only
be told apart from frame order.  Trajectories live in a small latent
space embedded into D dimensions by orthonormal rows, so a frame has
the norm of its latent point.  Target videos are additionally mapped
through x A + b, get extra frame noise and up to `temporal_jitter`
swaps of adjacent frames.  The offset b lies outside the embedded
subspace, where labeled videos only carry frame noise, so a model fit
on source alone never learns to ignore it.
"""

import logging
from collections import OrderedDict
import numpy as np

from ta3n.data.record import FrameFeatureRecord
from ta3n.data.record import DomainDataset
from ta3n.data.record import SyntheticSpecError
from ta3n.data.record import SOURCE
from ta3n.data.record import TARGET
from ta3n.train.config import BaseConfig
from ta3n.train.config import ConfigError


logger = logging.getLogger(__name__)

TRAIN = 'train'
VAL = 'val'
SPLITS = [TRAIN, VAL]

MAX_CONDITION_NUMBER = 100.0
MAX_TRANSFORM_DRAWS = 50


def dataset_name(domain, split):
    """Gets name such as source_train used for files and lookups
    """
    return domain + '_' + split


class SyntheticShiftSpec(BaseConfig):
    """Parameters of the synthetic generator, stored in a file in
       configparser format with one [synthetic] section whose
       options are the attribute names below
    """
    SECTION = 'synthetic'

    SCHEMA = OrderedDict([('num_classes', int),
                          ('feature_dim', int),
                          ('frames_per_video', int),
                          ('latent_dim', int),
                          ('train_per_class', int),
                          ('val_per_class', int),
                          ('trajectory_scale', float),
                          ('latent_noise_sigma', float),
                          ('frame_noise_sigma', float),
                          ('target_noise_sigma', float),
                          ('temporal_jitter', int),
                          ('shift_mix', float),
                          ('target_offset', float),
                          ('identity_target', bool),
                          ('seed', int)])

    def __init__(self, configfile=None, **overrides):
        """Defaults, then values from `configfile`, then `overrides`

        :raises ConfigError: if the file is missing or unparseable
        :raises SyntheticSpecError: if the resulting spec is degenerate
        """
        super(SyntheticShiftSpec, self).__init__()
        self.num_classes = 4
        self.feature_dim = 16
        self.frames_per_video = 12
        self.latent_dim = 3
        self.train_per_class = 40
        self.val_per_class = 10
        self.trajectory_scale = 1.0
        self.latent_noise_sigma = 0.1
        self.frame_noise_sigma = 0.05
        self.target_noise_sigma = 0.1
        self.temporal_jitter = 1
        self.shift_mix = 0.2
        self.target_offset = 3.0
        self.identity_target = False
        self.seed = 0
        if configfile is not None:
            self._parse_config(configfile)
        for name, value in overrides.items():
            if name not in SyntheticShiftSpec.SCHEMA:
                raise SyntheticSpecError('Unknown synthetic option ' + name)
            setattr(self, name, value)
        self.validate()

    def _parse_config(self, configfile):
        config = self._get_config(configfile)
        if config is None:
            raise ConfigError('Spec file ' + configfile + ' not found')
        for option, kind in SyntheticShiftSpec.SCHEMA.items():
            raw = self._get_value(config, SyntheticShiftSpec.SECTION, option)
            if raw is not None:
                setattr(self, option, self._convert(
                    SyntheticShiftSpec.SECTION, option, raw, kind))

    def validate(self):
        """
        :raises SyntheticSpecError: on a degenerate spec
        """
        if self.num_classes < 2:
            raise SyntheticSpecError('Need at least 2 classes, got ' +
                                     str(self.num_classes))
        if self.feature_dim < 2:
            raise SyntheticSpecError('Need feature_dim of at least 2, got ' +
                                     str(self.feature_dim))
        if self.frames_per_video < 2:
            raise SyntheticSpecError('Need at least 2 frames per video')
        if self.latent_dim < 1 or self.latent_dim > self.feature_dim:
            raise SyntheticSpecError('latent_dim must be in [1, ' +
                                     str(self.feature_dim) + ']')
        if self.train_per_class < 2 or self.val_per_class < 2:
            raise SyntheticSpecError('Need at least 2 videos per class per '
                                     'domain in every split')
        for name in ('latent_noise_sigma', 'frame_noise_sigma',
                     'target_noise_sigma', 'shift_mix', 'temporal_jitter',
                     'trajectory_scale'):
            if getattr(self, name) < 0:
                raise SyntheticSpecError(name + ' must be nonnegative')

    def get_class_names(self):
        names = []
        for c in range(self.num_classes):
            direction = 'reversed' if c % 2 else 'forward'
            names.append('pattern' + str(c // 2) + '-' + direction)
        return names

    def get_counts(self):
        return {TRAIN: self.train_per_class, VAL: self.val_per_class}

    def write(self, path):
        section = OrderedDict((name, getattr(self, name))
                              for name in SyntheticShiftSpec.SCHEMA)
        self._write_sections(OrderedDict([(SyntheticShiftSpec.SECTION,
                                           section)]), path)


class DomainTransform(object):
    """Affine map x A + b applied to target frames
    """

    def __init__(self, matrix, offset):
        self._matrix = np.asarray(matrix, dtype=np.float64)
        self._offset = np.asarray(offset, dtype=np.float64)

    def get_matrix(self):
        return self._matrix

    def get_offset(self):
        return self._offset

    def get_condition_number(self):
        return float(np.linalg.cond(self._matrix))

    def apply(self, frames):
        return frames.dot(self._matrix) + self._offset


def _offset_direction(dim, rng, embedding):
    direction = rng.standard_normal(dim)
    if embedding is not None:
        outside = direction - embedding.T.dot(embedding.dot(direction))
        if np.linalg.norm(outside) > 1e-8:
            direction = outside
    return direction / np.linalg.norm(direction)


def make_target_transform(spec, rng, embedding=None):
    """Draws A = I + shift_mix M and b of norm target_offset

    With `embedding` (latent_dim x D, orthonormal rows) b is drawn
    orthogonal to the embedded subspace, unless that subspace is the
    whole space.

    :raises SyntheticSpecError: if no draw has condition number <= 100
    """
    dim = spec.feature_dim
    if spec.identity_target:
        return DomainTransform(np.eye(dim), np.zeros(dim))
    for attempt in range(MAX_TRANSFORM_DRAWS):
        mix = rng.standard_normal((dim, dim)) / np.sqrt(dim)
        matrix = np.eye(dim) + spec.shift_mix * mix
        offset = spec.target_offset * _offset_direction(dim, rng, embedding)
        transform = DomainTransform(matrix, offset)
        if transform.get_condition_number() <= MAX_CONDITION_NUMBER:
            return transform
        logger.debug('Rejected target transform draw ' + str(attempt) +
                     ' with condition number ' +
                     str(transform.get_condition_number()))
    raise SyntheticSpecError('Unable to draw a target transform with '
                             'condition number <= ' +
                             str(MAX_CONDITION_NUMBER) +
                             ', lower shift_mix')


class TrajectoryBank(object):
    """Latent trajectory per class pair plus the D dimensional embedding

    Every trajectory travels between trajectory_scale and twice that
    from start to end, so a pair stays separable by direction.
    """

    def __init__(self, spec, rng):
        num_pairs = (spec.num_classes + 1) // 2
        scale = spec.trajectory_scale
        shape = (num_pairs, spec.latent_dim)
        self._start = rng.uniform(-scale, scale, size=shape)
        heading = rng.standard_normal(shape)
        heading /= np.linalg.norm(heading, axis=1, keepdims=True)
        travel = rng.uniform(scale, 2.0 * scale, size=(num_pairs, 1))
        self._end = self._start + travel * heading
        self._bend = rng.uniform(-scale, scale, size=shape)
        basis, _ = np.linalg.qr(rng.standard_normal((spec.feature_dim,
                                                     spec.latent_dim)))
        self._embedding = basis.T

    def get_embedding(self):
        return self._embedding

    def latent(self, label, times):
        """Latent points of class `label` at `times` in [0, 1]

        Odd classes run the trajectory of their pair backwards.
        """
        pair = label // 2
        if label % 2:
            times = 1.0 - times
        t = times[:, None]
        return (self._start[pair] * (1.0 - t) + self._end[pair] * t +
                self._bend[pair] * np.sin(np.pi * t))


def _jitter(frames, swaps, rng):
    frames = frames.copy()
    for _ in range(swaps):
        j = int(rng.integers(0, frames.shape[0] - 1))
        frames[[j, j + 1]] = frames[[j + 1, j]]
    return frames


def _video(spec, bank, transform, domain, label, rng):
    times = np.linspace(0.0, 1.0, spec.frames_per_video)
    latent = bank.latent(label, times)
    latent = latent * rng.uniform(0.8, 1.2)
    latent = latent + spec.latent_noise_sigma * rng.standard_normal(
        latent.shape)
    frames = latent.dot(bank.get_embedding())
    frames = frames + spec.frame_noise_sigma * rng.standard_normal(
        frames.shape)
    if domain == TARGET:
        frames = transform.apply(frames)
        frames = frames + spec.target_noise_sigma * rng.standard_normal(
            frames.shape)
        if spec.temporal_jitter > 0:
            swaps = int(rng.integers(0, spec.temporal_jitter + 1))
            frames = _jitter(frames, swaps, rng)
    return frames


def generate_synthetic(spec):
    """Generates train and val datasets for both domains

    Every video draws from its own generator seeded by
    (seed, domain, split, class, index) so datasets are deterministic
    and splits are disjoint draws.

    :returns: OrderedDict of name (see dataset_name) -> DomainDataset
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    bank = TrajectoryBank(spec, rng)
    transform = make_target_transform(spec, rng,
                                      embedding=bank.get_embedding())
    logger.debug('Target transform condition number ' +
                 str(transform.get_condition_number()))
    class_names = spec.get_class_names()
    datasets = OrderedDict()
    for d, domain in enumerate([SOURCE, TARGET]):
        for s, split in enumerate(SPLITS):
            records = []
            for c in range(spec.num_classes):
                for i in range(spec.get_counts()[split]):
                    video_rng = np.random.default_rng([spec.seed, d, s, c, i])
                    frames = _video(spec, bank, transform, domain, c,
                                    video_rng)
                    video_id = '%s-%s-c%d-%04d' % (domain, split, c, i)
                    records.append(FrameFeatureRecord(video_id, domain, c,
                                                      frames))
            datasets[dataset_name(domain, split)] = DomainDataset(
                records, feature_dim=spec.feature_dim,
                class_names=class_names)
            logger.info('Generated ' + str(len(records)) + ' ' + domain +
                        ' ' + split + ' videos')
    return datasets
