#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
test_tape
----------------------------------

Tests for `tape` and `ops` modules.
"""

import unittest
import numpy as np

from ta3n.autodiff.tape import Tape
from ta3n.autodiff.tape import DifferentiableValue
from ta3n.autodiff.tape import AutodiffError
from ta3n.autodiff.tape import ShapeError
from ta3n.autodiff.tape import NonScalarLossError
from ta3n.autodiff.tape import parameter
from ta3n.autodiff.tape import backward
from ta3n.autodiff.tape import zero_grad


class TestTape(unittest.TestCase):

    def test_differentiable_value_constructor(self):
        val = DifferentiableValue([1, 2, 3])
        self.assertEqual(val.shape, (3,))
        self.assertEqual(val.values.dtype, np.float64)
        self.assertTrue(np.array_equal(val.grad, np.zeros(3)))
        self.assertEqual(val.requires_grad, False)
        self.assertEqual(val.get_name(), None)
        self.assertEqual(val.get_provenance(), 'leaf')
        self.assertEqual(val.get_tape(), None)
        val.set_name('foo')
        self.assertEqual(val.get_name(), 'foo')
        self.assertTrue('foo' in repr(val))

    def test_set_values(self):
        p = parameter([[1.0, 2.0]], name='w')
        p.grad[:] = 5.0
        p.set_values([[3.0, 4.0]])
        self.assertTrue(np.array_equal(p.values, [[3.0, 4.0]]))
        self.assertTrue(np.array_equal(p.grad, [[0.0, 0.0]]))
        try:
            p.set_values([1.0, 2.0])
            self.fail('Expected ShapeError')
        except ShapeError as e:
            self.assertTrue('w' in str(e))

    def test_relu(self):
        tape = Tape()
        out = tape.relu(tape.constant([-1.0, 0.0, 2.0]))
        self.assertTrue(np.array_equal(out.values, [0.0, 0.0, 2.0]))
        self.assertEqual(out.get_provenance(), 'relu')
        self.assertEqual(out.get_tape(), tape)

    def test_mean_axis(self):
        tape = Tape()
        out = tape.mean_axis(tape.constant([[1.0, 3.0], [3.0, 5.0]]), 0)
        self.assertTrue(np.array_equal(out.values, [2.0, 4.0]))

    def test_softmax(self):
        tape = Tape()
        out = tape.softmax(tape.constant([0.0, 0.0]))
        self.assertTrue(np.allclose(out.values, [0.5, 0.5]))

    def test_log_softmax_no_overflow(self):
        tape = Tape()
        out = tape.log_softmax(tape.constant([1000.0, 0.0]))
        self.assertTrue(np.all(np.isfinite(out.values)))
        self.assertAlmostEqual(out.values[0], 0.0)

    def test_matmul_shape_mismatch(self):
        tape = Tape()
        try:
            tape.matmul(tape.constant(np.ones((2, 3))),
                        tape.constant(np.ones((2, 3))))
            self.fail('Expected ShapeError')
        except ShapeError as e:
            self.assertTrue('matmul' in str(e))
            self.assertTrue('(2, 3)' in str(e))

    def test_add_shape_mismatch(self):
        tape = Tape()
        try:
            tape.add(tape.constant(np.ones(3)), tape.constant(np.ones(2)))
            self.fail('Expected ShapeError')
        except ShapeError as e:
            self.assertTrue('add' in str(e))

    def test_concat_and_take(self):
        tape = Tape()
        a = tape.constant([[1.0, 2.0]])
        b = tape.constant([[3.0]])
        c = tape.concat([a, b], axis=-1)
        self.assertTrue(np.array_equal(c.values, [[1.0, 2.0, 3.0]]))
        t = tape.take(c, [2, 0], axis=1)
        self.assertTrue(np.array_equal(t.values, [[3.0, 1.0]]))
        try:
            tape.take(c, [3], axis=1)
            self.fail('Expected ShapeError')
        except ShapeError:
            pass

    def test_unknown_operation(self):
        tape = Tape()
        try:
            tape.forward_op('foo', [tape.constant([1.0])])
            self.fail('Expected AutodiffError')
        except AutodiffError as e:
            self.assertTrue('foo' in str(e))

    def test_linear_gradient(self):
        x = np.array([1.0, -2.0, 3.0])
        w = parameter([0.5, 0.5, 0.5])
        tape = Tape()
        loss = tape.sum_axis(tape.multiply(w, tape.constant(x)), 0)
        backward(loss)
        self.assertTrue(np.allclose(w.grad, x))

    def test_gradient_accumulates_then_zero_grad(self):
        x = np.array([1.0, 2.0])
        w = parameter([0.0, 0.0])
        for i in range(2):
            tape = Tape()
            backward(tape.sum_axis(tape.multiply(w, tape.constant(x)), 0))
        self.assertTrue(np.allclose(w.grad, 2 * x))
        zero_grad([w])
        self.assertTrue(np.array_equal(w.grad, [0.0, 0.0]))

    def test_grl_forward_is_identity(self):
        tape = Tape()
        out = tape.forward_op('grl', [tape.constant([1.5, -2.0])],
                              lambda_grl=1.0)
        self.assertTrue(np.array_equal(out.values, [1.5, -2.0]))

    def test_grl_backward_flips_sign(self):
        x = np.array([1.0, -2.0, 3.0])
        w = parameter([0.2, 0.2, 0.2])
        tape = Tape()
        prod = tape.multiply(w, tape.constant(x))
        loss = tape.sum_axis(tape.forward_op('grl', [prod], lambda_grl=1.0),
                             0)
        backward(loss)
        self.assertTrue(np.allclose(w.grad, -x))

    def test_grl_backward_scaled(self):
        w = parameter([0.0, 0.0])
        tape = Tape()
        reversed_w = tape.forward_op('grl', [w], lambda_grl=0.5)
        loss = tape.sum_axis(tape.multiply(reversed_w,
                                           tape.constant([2.0, -4.0])), 0)
        backward(loss)
        self.assertTrue(np.allclose(w.grad, [-1.0, 2.0]))

        # same graph with an explicit -0.5 * loss term
        other = parameter([0.0, 0.0])
        tape = Tape()
        loss = tape.scale(tape.sum_axis(
            tape.multiply(other, tape.constant([2.0, -4.0])), 0), -0.5)
        backward(loss)
        self.assertTrue(np.allclose(w.grad, other.grad))

    def test_grl_pass_through_when_not_reversing(self):
        w = parameter([1.0])
        tape = Tape(reverse_gradients=False)
        self.assertFalse(tape.is_reversing_gradients())
        out = tape.forward_op('grl', [w], lambda_grl=1.0)
        backward(tape.sum_axis(out, 0))
        self.assertTrue(np.allclose(w.grad, [1.0]))

    def test_detach_stops_gradient(self):
        w = parameter([2.0])
        tape = Tape()
        loss = tape.sum_axis(tape.multiply(w, tape.detach(w)), 0)
        backward(loss)
        self.assertTrue(np.allclose(w.grad, [2.0]))
        self.assertEqual(len(tape.get_detached_values()), 1)

    def test_detach_replay(self):
        w = parameter([2.0])
        tape = Tape(replay=[np.array([7.0])])
        out = tape.detach(w)
        self.assertTrue(np.array_equal(out.values, [7.0]))
        try:
            tape.detach(w)
            self.fail('Expected AutodiffError')
        except AutodiffError as e:
            self.assertTrue('Replay' in str(e))

    def test_backward_non_scalar(self):
        tape = Tape()
        out = tape.relu(parameter([1.0, 2.0]))
        try:
            backward(out)
            self.fail('Expected NonScalarLossError')
        except NonScalarLossError as e:
            self.assertTrue('(2,)' in str(e))

    def test_backward_shared_subexpression(self):
        w = parameter([3.0])
        tape = Tape()
        sq = tape.multiply(w, w)
        loss = tape.sum_axis(tape.add(sq, sq), 0)
        backward(loss)
        # d/dw 2 w^2 = 4 w
        self.assertTrue(np.allclose(w.grad, [12.0]))

    def test_broadcast_gradient(self):
        b = parameter([1.0, 2.0])
        tape = Tape()
        out = tape.add(tape.constant(np.ones((3, 2))), b)
        backward(tape.sum_axis(tape.sum_axis(out, 0), 0))
        self.assertTrue(np.allclose(b.grad, [3.0, 3.0]))


if __name__ == '__main__':
    unittest.main()
