#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
test_losses
----------------------------------

Tests for `losses` module.
"""

import unittest
import numpy as np

from ta3n.autodiff.tape import Tape
from ta3n.autodiff.tape import backward
from ta3n.autodiff.tape import zero_grad
from ta3n.autodiff.functional import cross_entropy
from ta3n.autodiff.gradcheck import finite_difference_check
from ta3n.model.network import ForwardOutputs
from ta3n.model.network import ModelConfig
from ta3n.model.network import Ta3nModel
from ta3n.losses import LossWeights
from ta3n.losses import LossBreakdown
from ta3n.losses import LossError
from ta3n.losses import EmptySourceBatchError
from ta3n.losses import MissingScaleError
from ta3n.losses import prediction_loss
from ta3n.losses import spatial_domain_loss
from ta3n.losses import temporal_domain_loss
from ta3n.losses import relation_domain_loss
from ta3n.losses import attentive_entropy_loss
from ta3n.losses import total_loss


def _scalar(value):
    return float(value.values)


class TestLossWeights(unittest.TestCase):

    def test_constructor(self):
        weights = LossWeights(0.75, 0.5, 0.75, 0.3)
        self.assertEqual(weights.as_tuple(), (0.75, 0.5, 0.75, 0.3))
        self.assertEqual(list(weights.as_dict().keys()),
                         ['lambda_s', 'lambda_r', 'lambda_t', 'gamma'])
        self.assertFalse(weights.is_source_only())
        self.assertTrue(LossWeights().is_source_only())

    def test_negative_weight(self):
        try:
            LossWeights(lambda_r=-0.1)
            self.fail('Expected LossError')
        except LossError as e:
            self.assertTrue('lambda_r' in str(e))

    def test_breakdown_absent_components(self):
        breakdown = LossBreakdown(LossWeights())
        values = breakdown.get_component_values()
        self.assertEqual(list(values.values()), [0.0] * 6)
        self.assertTrue(breakdown.is_finite())


class TestLossTerms(unittest.TestCase):

    def test_prediction_loss(self):
        tape = Tape()
        perfect = tape.constant([[50.0, -50.0], [-50.0, 50.0]])
        self.assertTrue(_scalar(prediction_loss(tape, perfect,
                                                [0, 1])) < 1e-12)
        uniform = tape.constant(np.zeros((3, 12)))
        self.assertAlmostEqual(_scalar(prediction_loss(tape, uniform,
                                                       [0, 5, 11])),
                               np.log(12.0), places=12)

    def test_prediction_loss_decomposition(self):
        rng = np.random.default_rng(0)
        logits = rng.normal(size=(3, 4))
        labels = [1, 3, 0]
        tape = Tape()
        res = _scalar(prediction_loss(tape, tape.constant(logits), labels))
        oracle = np.mean([_scalar(cross_entropy(tape,
                                                tape.constant(logits[i]),
                                                labels[i]))
                          for i in range(3)])
        self.assertAlmostEqual(res, oracle, places=12)

    def test_prediction_loss_ignores_unlabeled(self):
        tape = Tape()
        logits = tape.constant([[0.0, 0.0], [100.0, -100.0]])
        res = _scalar(prediction_loss(tape, logits, [-1, 0]))
        self.assertTrue(res < 1e-12)

    def test_prediction_loss_no_labels(self):
        tape = Tape()
        try:
            prediction_loss(tape, tape.constant(np.zeros((2, 3))), [-1, -1])
            self.fail('Expected EmptySourceBatchError')
        except EmptySourceBatchError as e:
            self.assertTrue('2 videos' in str(e))

    def test_spatial_domain_loss(self):
        tape = Tape()
        uniform = tape.constant(np.zeros((6, 2)))
        self.assertAlmostEqual(_scalar(spatial_domain_loss(tape, uniform,
                                                           [0, 1])),
                               np.log(2.0), places=12)
        perfect = np.array([[40.0, -40.0]] * 3 + [[-40.0, 40.0]] * 3)
        self.assertTrue(_scalar(spatial_domain_loss(
            tape, tape.constant(perfect), [0, 1])) < 1e-12)

    def test_spatial_domain_loss_per_frame_loop(self):
        rng = np.random.default_rng(1)
        logits = rng.normal(size=(10, 2))
        domains = [0, 1]
        tape = Tape()
        res = _scalar(spatial_domain_loss(tape, tape.constant(logits),
                                          domains))
        per_video = []
        for v in range(2):
            frames = []
            for k in range(5):
                row = logits[v * 5 + k]
                frames.append(-(row[domains[v]] - np.log(np.sum(
                    np.exp(row)))))
            per_video.append(np.mean(frames))
        self.assertTrue(abs(res - np.mean(per_video)) < 1e-12)

    def test_temporal_domain_loss(self):
        rng = np.random.default_rng(2)
        logits = rng.normal(size=(4, 2))
        domains = [0, 0, 1, 1]
        tape = Tape()
        res = _scalar(temporal_domain_loss(tape, tape.constant(logits),
                                           domains))
        oracle = np.mean([_scalar(cross_entropy(tape,
                                                tape.constant(logits[i]),
                                                domains[i]))
                          for i in range(4)])
        self.assertAlmostEqual(res, oracle, places=12)
        self.assertAlmostEqual(_scalar(temporal_domain_loss(
            tape, tape.constant(np.zeros((2, 2))), [0, 1])), np.log(2.0),
            places=12)

    def test_relation_domain_loss(self):
        rng = np.random.default_rng(3)
        domains = [0, 1, 1]
        per_scale = [rng.normal(size=(3, 2)) for n in range(4)]
        tape = Tape()
        res = _scalar(relation_domain_loss(
            tape, [tape.constant(x) for x in per_scale], domains,
            num_frames=5))
        oracle = 0.0
        for logits in per_scale:
            scale_loss = 0.0
            for i in range(3):
                row = logits[i]
                scale_loss += -(row[domains[i]] -
                                np.log(np.sum(np.exp(row))))
            oracle += scale_loss / 3
        oracle /= 4
        self.assertTrue(abs(res - oracle) < 1e-12)

    def test_relation_domain_loss_single_scale(self):
        logits = np.array([[0.3, -0.2], [1.0, 2.0]])
        tape = Tape()
        res = _scalar(relation_domain_loss(tape, [tape.constant(logits)],
                                           [0, 1], num_frames=2))
        plain = _scalar(temporal_domain_loss(tape, tape.constant(logits),
                                             [0, 1]))
        self.assertAlmostEqual(res, plain, places=12)

    def test_relation_domain_loss_missing_scale(self):
        tape = Tape()
        try:
            relation_domain_loss(tape, [tape.constant(np.zeros((1, 2)))],
                                 [0], num_frames=5)
            self.fail('Expected MissingScaleError')
        except MissingScaleError as e:
            self.assertTrue('4' in str(e))
        try:
            relation_domain_loss(tape, [], [0])
            self.fail('Expected MissingScaleError')
        except MissingScaleError:
            pass

    def test_attentive_entropy_one_hot_class(self):
        tape = Tape()
        res = attentive_entropy_loss(tape,
                                     tape.constant([[0.3, 0.1]]),
                                     tape.constant([[60.0, -60.0, -60.0]]))
        self.assertTrue(_scalar(res) < 1e-12)

    def test_attentive_entropy_uniform(self):
        tape = Tape()
        res = attentive_entropy_loss(tape, tape.constant([[0.0, 0.0]]),
                                     tape.constant([[0.0, 0.0, 0.0, 0.0]]))
        self.assertAlmostEqual(_scalar(res), 4.0, places=12)

    def test_attentive_entropy_mixed(self):
        tape = Tape()
        res = attentive_entropy_loss(
            tape, tape.constant(np.log([[0.9, 0.1]])),
            tape.constant(np.log([[0.7, 0.2, 0.1]])))
        hd = -0.9 * np.log2(0.9) - 0.1 * np.log2(0.1)
        hy = -(0.7 * np.log2(0.7) + 0.2 * np.log2(0.2) +
               0.1 * np.log2(0.1))
        self.assertAlmostEqual(_scalar(res), (1 + hd) * hy, places=12)
        self.assertAlmostEqual(_scalar(res), 1.6994, places=4)

    def test_attentive_entropy_without_domain(self):
        tape = Tape()
        res = attentive_entropy_loss(tape, None,
                                     tape.constant([[0.0, 0.0, 0.0, 0.0]]))
        self.assertAlmostEqual(_scalar(res), 2.0, places=12)


class TestTotalLoss(unittest.TestCase):

    def _outputs(self, tape, seed=0):
        rng = np.random.default_rng(seed)
        out = ForwardOutputs()
        out.class_logits = tape.constant(rng.normal(size=(4, 3)))
        out.spatial_domain_logits = tape.constant(rng.normal(size=(12, 2)))
        out.relation_domain_logits = [tape.constant(rng.normal(size=(4, 2)))
                                      for n in range(2)]
        out.temporal_domain_logits = tape.constant(rng.normal(size=(4, 2)))
        return out

    def test_source_only(self):
        tape = Tape()
        out = self._outputs(tape)
        res = total_loss(tape, out, [0, 1, -1, -1], [0, 0, 1, 1],
                         LossWeights(), num_frames=3)
        self.assertEqual(_scalar(res.total), _scalar(res.pred))
        self.assertTrue(res.spatial is not None)
        self.assertTrue(res.is_finite())

    def test_recomposition(self):
        tape = Tape()
        out = self._outputs(tape, seed=1)
        weights = LossWeights(0.75, 0.5, 0.75, 0.3)
        res = total_loss(tape, out, [2, 1, -1, -1], [0, 0, 1, 1], weights,
                         num_frames=3)
        values = res.get_component_values()
        oracle = (values['pred'] + 0.3 * values['attentive_entropy'] +
                  0.75 * values['spatial'] + 0.5 * values['relation'] +
                  0.75 * values['temporal'])
        self.assertTrue(abs(values['total'] - oracle) < 1e-12)

    def test_baseline_drops_relation_and_entropy(self):
        tape = Tape()
        out = self._outputs(tape, seed=2)
        # a pooling model carries no relation domain logits
        out.relation_domain_logits = []
        weights = LossWeights(0.75, 0.5, 0.75, 0.3)
        res = total_loss(tape, out, [2, 1, -1, -1], [0, 0, 1, 1], weights,
                         attentive_entropy=False)
        self.assertEqual(res.relation, None)
        self.assertEqual(res.attentive_entropy, None)
        values = res.get_component_values()
        oracle = (values['pred'] + 0.75 * values['spatial'] +
                  0.75 * values['temporal'])
        self.assertTrue(abs(values['total'] - oracle) < 1e-12)

    def test_without_attentive_entropy(self):
        tape = Tape()
        out = self._outputs(tape, seed=3)
        res = total_loss(tape, out, [0, 1, -1, -1], [0, 0, 1, 1],
                         LossWeights(gamma=1.0), attentive_entropy=False)
        self.assertEqual(res.attentive_entropy, None)
        self.assertTrue(res.relation is not None)

    def test_gradient_of_full_objective(self):
        cfg = ModelConfig(num_frames=3, input_dim=3, feature_dim=4,
                          num_classes=3, init_seed=2)
        model = Ta3nModel(cfg)
        frames = np.random.default_rng(4).normal(size=(4, 3, 3))
        weights = LossWeights(0.75, 0.5, 0.75, 0.3)

        def loss_fn(tape):
            out = model.forward(tape, frames)
            return total_loss(tape, out, [0, 2, -1, -1], [0, 0, 1, 1],
                              weights, num_frames=3).total
        err = finite_difference_check(loss_fn, model.get_parameters(),
                                      max_coordinates=3, seed=0)
        self.assertTrue(err < 1e-4)

    def test_gradient_across_architectures(self):
        frames = np.random.default_rng(5).normal(size=(4, 3, 3))
        weights = LossWeights(0.75, 0.5, 0.75, 0.3)
        configs = (dict(variant='tempooling', attention_mode='none'),
                   dict(attention_mode='none'),
                   dict())
        for extra in configs:
            cfg = ModelConfig(num_frames=3, input_dim=3, feature_dim=4,
                              num_classes=3, init_seed=1, **extra)
            model = Ta3nModel(cfg)
            attentive = cfg.attention_mode != 'none'

            def loss_fn(tape):
                out = model.forward(tape, frames)
                return total_loss(tape, out, [1, 0, -1, -1], [0, 0, 1, 1],
                                  weights, num_frames=3,
                                  attentive_entropy=attentive).total
            err = finite_difference_check(loss_fn, model.get_parameters(),
                                          max_coordinates=2, seed=1)
            self.assertTrue(err < 1e-4, str(extra))

    def test_reversal_scales_feature_gradient(self):
        frames = np.random.default_rng(6).normal(size=(4, 3, 3))
        cfg = ModelConfig(num_frames=3, input_dim=3, feature_dim=4,
                          num_classes=3, init_seed=3)
        for lambda_grl in (0.0, 0.5, 1.0):
            model = Ta3nModel(cfg)
            model.get_grl_config().set_lambda(lambda_grl)
            grads = []
            for reverse in (True, False):
                zero_grad(model.get_parameters())
                tape = Tape(reverse_gradients=reverse)
                out = model.forward(tape, frames)
                backward(temporal_domain_loss(tape, out.temporal_domain_logits,
                                             [0, 0, 1, 1]))
                grads.append([p.grad.copy()
                              for p in model.spatial.get_parameters()])
            for reversed_grad, plain in zip(*grads):
                self.assertTrue(np.max(np.abs(
                    reversed_grad + lambda_grl * plain)) < 1e-10)


if __name__ == '__main__':
    unittest.main()
