#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
test_gridsearch
----------------------------------

Tests for `gridsearch` module.
"""

import unittest
import tempfile
import shutil
import os
import csv
from collections import OrderedDict
from mock import patch

from ta3n.data.synthetic import SyntheticShiftSpec
from ta3n.data.synthetic import generate_synthetic
from ta3n.evaluation.metrics import MetricsReport
from ta3n.train.config import TrainConfig
from ta3n.train import gridsearch
from ta3n.train.gridsearch import GridCandidate
from ta3n.train.gridsearch import swept_weights
from ta3n.train.gridsearch import coarse_candidates
from ta3n.train.gridsearch import fine_candidates
from ta3n.train.gridsearch import select_best
from ta3n.train.gridsearch import grid_search
from ta3n.train.gridsearch import write_grid_outputs
from ta3n.train.gridsearch import COARSE
from ta3n.train.gridsearch import FINE
from ta3n.train.gridsearch import COARSE_GRID
from ta3n.train.gridsearch import FINE_GRID
from ta3n.train.gridsearch import run_candidate


def _fake_run(config, datasets, run_dir=None):
    report = MetricsReport()
    report.target_accuracy = 1.0 / (1.0 + abs(config.lambda_t - 0.1))
    report.source_accuracy = 0.9
    return report


def _candidate(index, accuracy, **weights):
    values = OrderedDict([('lambda_s', 0.0), ('lambda_r', 0.0),
                          ('lambda_t', 0.0), ('gamma', 0.0)])
    values.update(weights)
    candidate = GridCandidate(index, COARSE, 'lambda_s', values)
    candidate.target_accuracy = accuracy
    return candidate


class TestGridCandidates(unittest.TestCase):

    def test_grids(self):
        self.assertEqual(COARSE_GRID, [0.0, 1e-3, 1e-2, 1e-1, 1.0, 10.0])
        self.assertEqual(FINE_GRID, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_swept_weights(self):
        config = TrainConfig()
        self.assertEqual(swept_weights(config, COARSE),
                         ['lambda_s', 'lambda_r', 'lambda_t', 'gamma'])
        self.assertEqual(swept_weights(config, FINE),
                         ['lambda_s', 'lambda_r', 'lambda_t'])
        config.set_option('variant', 'tempooling')
        config.set_option('attention', 'none')
        self.assertEqual(swept_weights(config, COARSE),
                         ['lambda_s', 'lambda_t'])

    def test_coarse_candidates(self):
        candidates = coarse_candidates(TrainConfig())
        self.assertEqual(len(candidates), 24)
        self.assertEqual([c.index for c in candidates], list(range(24)))
        first = candidates[0]
        self.assertEqual(first.swept, 'lambda_s')
        self.assertEqual(list(first.weights.values()), [0.0, 1.0, 1.0, 1.0])
        self.assertEqual(candidates[-1].swept, 'gamma')
        self.assertEqual(candidates[-1].weights['gamma'], 10.0)

        config = TrainConfig()
        config.set_option('variant', 'tempooling')
        config.set_option('attention', 'none')
        candidates = coarse_candidates(config)
        self.assertEqual(len(candidates), 12)
        for candidate in candidates:
            self.assertEqual(candidate.weights['lambda_r'], 0.0)
            self.assertEqual(candidate.weights['gamma'], 0.0)

    def test_fine_candidates(self):
        config = TrainConfig()
        candidates = fine_candidates(config)
        self.assertEqual(len(candidates), 15)
        for candidate in candidates:
            self.assertEqual(candidate.weights['gamma'], 0.3)
        self.assertEqual(candidates[5].swept, 'lambda_r')
        self.assertEqual(candidates[5].weights['lambda_s'], 0.75)
        self.assertEqual(candidates[5].weights['lambda_r'], 0.0)

        joint = fine_candidates(config, joint=True)
        self.assertEqual(len(joint), 125)
        self.assertEqual(len(set(c.get_key() for c in joint)), 125)
        self.assertEqual(joint[0].swept, 'lambda_s+lambda_r+lambda_t')

    def test_make_config(self):
        base = TrainConfig()
        candidate = _candidate(0, None, lambda_s=0.5, gamma=0.1)
        config = candidate.make_config(base)
        self.assertEqual(config.lambda_s, 0.5)
        self.assertEqual(config.lambda_r, 0.0)
        self.assertEqual(base.lambda_s, 0.75)

    def test_select_best(self):
        self.assertEqual(select_best([]), None)
        a = _candidate(0, 0.5, lambda_s=1.0)
        b = _candidate(1, 0.75, lambda_s=1.0, lambda_r=1.0)
        c = _candidate(2, 0.75, lambda_s=0.1)
        d = _candidate(3, None)
        self.assertTrue(select_best([a, b, c, d]) is c)
        e = _candidate(4, 0.75, lambda_r=0.1)
        # equal sums fall back to the weight tuple
        self.assertTrue(select_best([c, e]) is e)


class TestGridSearch(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_coarse_search_dedups(self):
        with patch('ta3n.train.gridsearch.run_candidate',
                   side_effect=_fake_run) as mock_run:
            result = grid_search(TrainConfig(), {}, COARSE, jobs=2,
                                 run_dir=self.temp_dir)
            # the four all ones candidates train once
            self.assertEqual(mock_run.call_count, 21)
            run_dirs = sorted(os.path.basename(c[0][2])
                              for c in mock_run.call_args_list)
            self.assertEqual(run_dirs[0], 'candidate.000')
        self.assertEqual(len(result.candidates), 24)
        for candidate in result.candidates:
            self.assertTrue(candidate.target_accuracy is not None)
        self.assertEqual(result.best.weights['lambda_t'], 0.1)
        self.assertEqual(result.best_config.lambda_t, 0.1)
        self.assertEqual(result.best_config.lambda_s, 1.0)

    def test_nothing_swept_runs_base(self):
        config = TrainConfig()
        config.set_option('variant', 'tempooling')
        config.set_option('attention', 'none')
        config.set_option('use_spatial_disc', False)
        config.set_option('use_temporal_disc', False)
        with patch('ta3n.train.gridsearch.run_candidate',
                   side_effect=_fake_run) as mock_run:
            result = grid_search(config, {}, FINE)
            self.assertEqual(mock_run.call_count, 1)
        self.assertEqual(len(result.candidates), 1)
        self.assertEqual(result.best.swept, 'none')

    def test_replay_best_candidate(self):
        datasets = generate_synthetic(SyntheticShiftSpec(
            num_classes=2, feature_dim=4, frames_per_video=6, latent_dim=2,
            train_per_class=3, val_per_class=2, seed=1))
        config = TrainConfig()
        for name, value in (('variant', 'tempooling'), ('attention', 'none'),
                            ('video_feature_dim', 4), ('k_frames', 3),
                            ('source_batch', 6), ('epochs', 1)):
            config.set_option(name, value)
        config.set_option('use_spatial_disc', False)
        result = grid_search(config, datasets, FINE, jobs=2,
                             run_dir=self.temp_dir)
        self.assertEqual(len(result.candidates), 5)
        self.assertEqual([c.weights['lambda_t'] for c in result.candidates],
                         FINE_GRID)
        for candidate in result.candidates:
            self.assertTrue(os.path.isfile(os.path.join(
                self.temp_dir, 'candidate.%03d' % candidate.index,
                'metrics.jsonl')))
        replayed = run_candidate(result.best_config, datasets)
        self.assertEqual(replayed.target_accuracy,
                         result.best.target_accuracy)

    def test_unknown_stage(self):
        try:
            grid_search(TrainConfig(), {}, 'medium')
            self.fail('Expected ValueError')
        except ValueError as e:
            self.assertTrue('medium' in str(e))

    def test_write_grid_outputs(self):
        with patch('ta3n.train.gridsearch.run_candidate',
                   side_effect=_fake_run):
            result = grid_search(TrainConfig(), {}, FINE)
        write_grid_outputs(result, self.temp_dir)
        for name in (gridsearch.SCORES_CSV, gridsearch.SCORES_XLSX,
                     gridsearch.BEST_CONFIG_FILE):
            self.assertTrue(os.path.isfile(os.path.join(self.temp_dir,
                                                        name)), name)
        with open(os.path.join(self.temp_dir, gridsearch.SCORES_CSV)) as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], gridsearch.SCORE_HEADER)
        self.assertEqual(len(rows), 16)
        best = TrainConfig(os.path.join(self.temp_dir,
                                        gridsearch.BEST_CONFIG_FILE))
        self.assertEqual(best.lambda_t, 0.0)
        self.assertEqual(best.gamma, 0.3)


if __name__ == '__main__':
    unittest.main()
