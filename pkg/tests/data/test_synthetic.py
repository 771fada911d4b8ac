#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
test_synthetic
----------------------------------

Tests for `synthetic` module.
"""

import unittest
import tempfile
import shutil
import os
import numpy as np

from ta3n.data.record import SyntheticSpecError
from ta3n.data.synthetic import SyntheticShiftSpec
from ta3n.data.synthetic import DomainTransform
from ta3n.data.synthetic import TrajectoryBank
from ta3n.data.synthetic import make_target_transform
from ta3n.data.synthetic import generate_synthetic
from ta3n.data.synthetic import dataset_name
from ta3n.data.synthetic import MAX_CONDITION_NUMBER
from ta3n.train.config import ConfigError


def _small_spec(**overrides):
    values = dict(num_classes=2, feature_dim=4, frames_per_video=6,
                  latent_dim=2, train_per_class=3, val_per_class=2)
    values.update(overrides)
    return SyntheticShiftSpec(**values)


class TestSyntheticShiftSpec(unittest.TestCase):

    def test_defaults(self):
        spec = SyntheticShiftSpec()
        self.assertEqual(spec.num_classes, 4)
        self.assertEqual(spec.feature_dim, 16)
        self.assertEqual(spec.frames_per_video, 12)
        self.assertEqual(spec.train_per_class, 40)
        self.assertEqual(spec.seed, 0)
        self.assertEqual(spec.get_class_names(),
                         ['pattern0-forward', 'pattern0-reversed',
                          'pattern1-forward', 'pattern1-reversed'])

    def test_degenerate(self):
        for kwargs in (dict(num_classes=1), dict(feature_dim=1),
                       dict(latent_dim=20), dict(train_per_class=1),
                       dict(frame_noise_sigma=-1.0)):
            try:
                SyntheticShiftSpec(**kwargs)
                self.fail('Expected SyntheticSpecError for ' + str(kwargs))
            except SyntheticSpecError:
                pass

    def test_unknown_override(self):
        try:
            SyntheticShiftSpec(foo=1)
            self.fail('Expected SyntheticSpecError')
        except SyntheticSpecError as e:
            self.assertTrue('foo' in str(e))

    def test_write_and_read(self):
        temp_dir = tempfile.mkdtemp()
        try:
            path = os.path.join(temp_dir, 'spec.ini')
            spec = _small_spec(seed=9, shift_mix=0.25, identity_target=True)
            spec.write(path)
            loaded = SyntheticShiftSpec(path)
            for name in SyntheticShiftSpec.SCHEMA:
                self.assertEqual(getattr(loaded, name), getattr(spec, name))
        finally:
            shutil.rmtree(temp_dir)

    def test_partial_file_keeps_defaults(self):
        temp_dir = tempfile.mkdtemp()
        try:
            path = os.path.join(temp_dir, 'spec.ini')
            with open(path, 'w') as f:
                f.write('[synthetic]\nnum_classes = 6\n')
            spec = SyntheticShiftSpec(path, seed=4)
            self.assertEqual(spec.num_classes, 6)
            self.assertEqual(spec.feature_dim, 16)
            self.assertEqual(spec.seed, 4)
        finally:
            shutil.rmtree(temp_dir)

    def test_missing_file(self):
        temp_dir = tempfile.mkdtemp()
        try:
            SyntheticShiftSpec(os.path.join(temp_dir, 'nope.ini'))
            self.fail('Expected ConfigError')
        except ConfigError as e:
            self.assertTrue('nope.ini' in str(e))
        finally:
            shutil.rmtree(temp_dir)


class TestGenerateSynthetic(unittest.TestCase):

    def test_counts_and_names(self):
        spec = _small_spec()
        datasets = generate_synthetic(spec)
        self.assertEqual(list(datasets.keys()),
                         ['source_train', 'source_val',
                          'target_train', 'target_val'])
        self.assertEqual(len(datasets[dataset_name('source', 'train')]), 6)
        self.assertEqual(len(datasets['target_val']), 4)
        record = datasets['target_val'].get_records()[0]
        self.assertEqual(record.get_video_id(), 'target-val-c0-0000')
        self.assertEqual(record.get_domain(), 'target')
        self.assertEqual(record.get_frames().shape, (6, 4))
        self.assertEqual(datasets['source_train'].get_num_classes(), 2)

    def test_default_training_count(self):
        spec = SyntheticShiftSpec(val_per_class=2)
        datasets = generate_synthetic(spec)
        total = len(datasets['source_train']) + len(datasets['target_train'])
        self.assertEqual(total, 320)

    def test_deterministic(self):
        a = generate_synthetic(_small_spec(seed=5))
        b = generate_synthetic(_small_spec(seed=5))
        c = generate_synthetic(_small_spec(seed=6))
        for name in a:
            for ra, rb in zip(a[name], b[name]):
                self.assertEqual(ra.get_video_id(), rb.get_video_id())
                self.assertTrue(np.array_equal(ra.get_frames(),
                                               rb.get_frames()))
        self.assertFalse(np.array_equal(
            a['source_train'].get_records()[0].get_frames(),
            c['source_train'].get_records()[0].get_frames()))

    def test_identity_target_zero_noise_has_no_shift(self):
        spec = _small_spec(identity_target=True, target_noise_sigma=0.0,
                           temporal_jitter=0, latent_noise_sigma=0.0,
                           frame_noise_sigma=0.0)
        datasets = generate_synthetic(spec)
        for c in range(2):
            src = np.array([r.get_frames() for r in datasets['source_train']
                            if r.get_label() == c])
            tgt = np.array([r.get_frames() for r in datasets['target_train']
                            if r.get_label() == c])
            # only the per video amplitude differs so directions agree
            src_dir = src.mean(axis=0) / np.linalg.norm(src.mean(axis=0))
            tgt_dir = tgt.mean(axis=0) / np.linalg.norm(tgt.mean(axis=0))
            self.assertTrue(np.allclose(src_dir, tgt_dir, atol=0.05))

    def test_pair_classes_reverse_in_time(self):
        spec = _small_spec()
        bank = TrajectoryBank(spec, np.random.default_rng(0))
        times = np.linspace(0.0, 1.0, 6)
        forward = bank.latent(0, times)
        reversed_ = bank.latent(1, times)
        self.assertTrue(np.allclose(forward, reversed_[::-1]))
        self.assertEqual(bank.get_embedding().shape, (2, 4))

    def test_target_transform(self):
        spec = _small_spec()
        transform = make_target_transform(spec, np.random.default_rng(1))
        self.assertTrue(transform.get_condition_number() <=
                        MAX_CONDITION_NUMBER)
        self.assertAlmostEqual(np.linalg.norm(transform.get_offset()),
                               spec.target_offset)
        identity = make_target_transform(_small_spec(identity_target=True),
                                         np.random.default_rng(1))
        frames = np.ones((3, 4))
        self.assertTrue(np.array_equal(identity.apply(frames), frames))

    def test_embedding_keeps_latent_norm(self):
        spec = SyntheticShiftSpec()
        bank = TrajectoryBank(spec, np.random.default_rng(0))
        embedding = bank.get_embedding()
        self.assertTrue(np.allclose(embedding.dot(embedding.T),
                                    np.eye(spec.latent_dim)))
        ends = bank.latent(0, np.array([0.0, 1.0]))
        travel = np.linalg.norm(ends[1] - ends[0])
        self.assertTrue(spec.trajectory_scale <= travel <=
                        2.0 * spec.trajectory_scale)

    def test_offset_outside_embedding(self):
        spec = SyntheticShiftSpec()
        bank = TrajectoryBank(spec, np.random.default_rng(3))
        transform = make_target_transform(spec, np.random.default_rng(3),
                                          embedding=bank.get_embedding())
        offset = transform.get_offset()
        self.assertAlmostEqual(np.linalg.norm(offset), spec.target_offset)
        self.assertTrue(np.allclose(bank.get_embedding().dot(offset), 0.0))

    def test_offset_when_embedding_fills_space(self):
        spec = _small_spec(latent_dim=4)
        bank = TrajectoryBank(spec, np.random.default_rng(0))
        transform = make_target_transform(spec, np.random.default_rng(0),
                                          embedding=bank.get_embedding())
        self.assertAlmostEqual(np.linalg.norm(transform.get_offset()),
                               spec.target_offset)

    def test_default_frames_are_unit_scale(self):
        datasets = generate_synthetic(SyntheticShiftSpec(val_per_class=2))
        frames = np.concatenate([r.get_frames()
                                 for r in datasets['source_train']])
        self.assertTrue(np.max(np.linalg.norm(frames, axis=1)) < 8.0)

    def test_domain_transform_apply(self):
        transform = DomainTransform([[2.0, 0.0], [0.0, 1.0]], [1.0, -1.0])
        out = transform.apply(np.array([[1.0, 1.0]]))
        self.assertTrue(np.array_equal(out, [[3.0, 0.0]]))


if __name__ == '__main__':
    unittest.main()
