# -*- coding: utf-8 -*-

"""Forward operations and their vector-Jacobian products

Every operation takes the owning tape, a list of input
DifferentiableValue objects and keyword attributes, and returns the
recorded output node.
"""

import logging
import numpy as np

from ta3n.autodiff.tape import ShapeError
from ta3n.autodiff.tape import DistributionError


logger = logging.getLogger(__name__)

LN2 = np.log(2.0)

# tolerance on sum(p) for entropy inputs
NORMALIZATION_TOLERANCE = 1e-6


def _shapes(inputs):
    return ', '.join(str(x.shape) for x in inputs)


def _check_arity(kind, inputs, count):
    if len(inputs) != count:
        raise ShapeError(kind + ' expects ' + str(count) +
                         ' input(s), got ' + str(len(inputs)))


def unbroadcast(grad, shape):
    """Sums `grad` down to `shape` undoing numpy broadcasting
    """
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(kind, a, b):
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(kind + ': cannot broadcast shapes ' +
                         _shapes([a, b]))


def matmul(tape, inputs):
    _check_arity('matmul', inputs, 2)
    a, b = inputs
    if b.values.ndim != 2 or a.values.ndim < 1 or \
            a.shape[-1] != b.shape[0]:
        raise ShapeError('matmul: incompatible shapes ' + _shapes(inputs))
    values = np.matmul(a.values, b.values)

    def vjp(g):
        grad_a = np.matmul(g, b.values.T)
        a2 = a.values.reshape(-1, a.shape[-1])
        g2 = g.reshape(-1, b.shape[1])
        grad_b = np.matmul(a2.T, g2)
        return grad_a, grad_b
    return tape.record('matmul', values, inputs, vjp)


def add(tape, inputs):
    _check_arity('add', inputs, 2)
    a, b = inputs
    _broadcast_shape('add', a, b)
    values = a.values + b.values

    def vjp(g):
        return unbroadcast(g, a.shape), unbroadcast(g, b.shape)
    return tape.record('add', values, inputs, vjp)


def multiply(tape, inputs):
    _check_arity('multiply', inputs, 2)
    a, b = inputs
    _broadcast_shape('multiply', a, b)
    values = a.values * b.values

    def vjp(g):
        return (unbroadcast(g * b.values, a.shape),
                unbroadcast(g * a.values, b.shape))
    return tape.record('multiply', values, inputs, vjp)


def relu(tape, inputs):
    _check_arity('relu', inputs, 1)
    a = inputs[0]
    mask = a.values > 0
    values = np.where(mask, a.values, 0.0)

    def vjp(g):
        return (g * mask,)
    return tape.record('relu', values, inputs, vjp)


def tanh(tape, inputs):
    _check_arity('tanh', inputs, 1)
    a = inputs[0]
    values = np.tanh(a.values)

    def vjp(g):
        return (g * (1.0 - values * values),)
    return tape.record('tanh', values, inputs, vjp)


def _check_axis(kind, a, axis):
    ndim = a.values.ndim
    if axis >= ndim or axis < -ndim:
        raise ShapeError(kind + ': axis ' + str(axis) +
                         ' out of range for shape ' + str(a.shape))


def mean_axis(tape, inputs, axis=0):
    _check_arity('mean_axis', inputs, 1)
    a = inputs[0]
    _check_axis('mean_axis', a, axis)
    count = a.shape[axis]
    values = a.values.mean(axis=axis)

    def vjp(g):
        expanded = np.expand_dims(g, axis)
        return (np.broadcast_to(expanded, a.shape) / count,)
    return tape.record('mean_axis', values, inputs, vjp)


def sum_axis(tape, inputs, axis=0):
    _check_arity('sum_axis', inputs, 1)
    a = inputs[0]
    _check_axis('sum_axis', a, axis)
    values = a.values.sum(axis=axis)

    def vjp(g):
        expanded = np.expand_dims(g, axis)
        return (np.array(np.broadcast_to(expanded, a.shape)),)
    return tape.record('sum_axis', values, inputs, vjp)


def concat(tape, inputs, axis=-1):
    if len(inputs) == 0:
        raise ShapeError('concat: needs at least one input')
    try:
        values = np.concatenate([x.values for x in inputs], axis=axis)
    except ValueError:
        raise ShapeError('concat: incompatible shapes ' + _shapes(inputs) +
                         ' along axis ' + str(axis))
    sizes = [x.shape[axis] for x in inputs]
    splits = np.cumsum(sizes)[:-1]

    def vjp(g):
        return np.split(g, splits, axis=axis)
    return tape.record('concat', values, inputs, vjp)


def scale(tape, inputs, factor=1.0):
    _check_arity('scale', inputs, 1)
    a = inputs[0]
    values = a.values * factor

    def vjp(g):
        return (g * factor,)
    return tape.record('scale', values, inputs, vjp)


def _log_softmax_values(x, axis):
    shifted = x - np.max(x, axis=axis, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=axis,
                                   keepdims=True))


def log_softmax(tape, inputs, axis=-1):
    _check_arity('log_softmax', inputs, 1)
    a = inputs[0]
    _check_axis('log_softmax', a, axis)
    values = _log_softmax_values(a.values, axis)
    probs = np.exp(values)

    def vjp(g):
        return (g - probs * np.sum(g, axis=axis, keepdims=True),)
    return tape.record('log_softmax', values, inputs, vjp)


def softmax(tape, inputs, axis=-1):
    _check_arity('softmax', inputs, 1)
    a = inputs[0]
    _check_axis('softmax', a, axis)
    shifted = np.exp(a.values - np.max(a.values, axis=axis, keepdims=True))
    values = shifted / np.sum(shifted, axis=axis, keepdims=True)

    def vjp(g):
        inner = np.sum(g * values, axis=axis, keepdims=True)
        return (values * (g - inner),)
    return tape.record('softmax', values, inputs, vjp)


def take(tape, inputs, indices=None, axis=0):
    _check_arity('take', inputs, 1)
    a = inputs[0]
    _check_axis('take', a, axis)
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1:
        raise ShapeError('take: indices must be one dimensional')
    size = a.shape[axis]
    if idx.size > 0 and (idx.min() < -size or idx.max() >= size):
        raise ShapeError('take: index out of range for axis ' + str(axis) +
                         ' of shape ' + str(a.shape))
    values = np.take(a.values, idx, axis=axis)

    def vjp(g):
        grad = np.zeros_like(a.values)
        np.add.at(np.moveaxis(grad, axis, 0), idx, np.moveaxis(g, axis, 0))
        return (grad,)
    return tape.record('take', values, inputs, vjp)


def reshape(tape, inputs, shape=None):
    _check_arity('reshape', inputs, 1)
    a = inputs[0]
    try:
        values = a.values.reshape(shape)
    except ValueError:
        raise ShapeError('reshape: cannot reshape ' + str(a.shape) +
                         ' into ' + str(shape))

    def vjp(g):
        return (g.reshape(a.shape),)
    return tape.record('reshape', values, inputs, vjp)


def grl(tape, inputs, lambda_grl=1.0):
    """Identity forward, gradient scaled by -lambda_grl backward
    """
    _check_arity('grl', inputs, 1)
    a = inputs[0]
    values = a.values.copy()
    if tape.is_reversing_gradients():
        factor = -float(lambda_grl)
    else:
        factor = 1.0

    def vjp(g):
        return (g * factor,)
    return tape.record('grl', values, inputs, vjp)


def detach(tape, inputs):
    """Stop-gradient: output values are treated as a constant
    """
    _check_arity('detach', inputs, 1)
    values = tape._next_detached(inputs[0].values.copy())
    return tape.record('detach', values, [], None)


def entropy(tape, inputs, axis=-1):
    """Base-2 entropy along `axis` with 0 * log 0 taken as 0

    :raises DistributionError: if entries fall outside [0, 1] or do
                               not sum to 1 within tolerance
    """
    _check_arity('entropy', inputs, 1)
    p = inputs[0]
    _check_axis('entropy', p, axis)
    pv = p.values
    tol = NORMALIZATION_TOLERANCE
    if np.any(pv < -tol) or np.any(pv > 1.0 + tol):
        raise DistributionError('entropy: entries outside [0, 1]')
    total = np.sum(pv, axis=axis)
    if np.any(np.abs(total - 1.0) > tol):
        raise DistributionError('entropy: input is not normalized, sums ' +
                                str(total))
    positive = pv > 0
    safe = np.where(positive, pv, 1.0)
    logs = np.log2(safe)
    values = -np.sum(np.where(positive, pv * logs, 0.0), axis=axis)

    def vjp(g):
        local = np.where(positive, -(logs + 1.0 / LN2), 0.0)
        return (np.expand_dims(g, axis) * local,)
    return tape.record('entropy', values, inputs, vjp)


OPERATIONS = {
    'matmul': matmul,
    'add': add,
    'multiply': multiply,
    'relu': relu,
    'tanh': tanh,
    'mean_axis': mean_axis,
    'sum_axis': sum_axis,
    'concat': concat,
    'scale': scale,
    'log_softmax': log_softmax,
    'softmax': softmax,
    'take': take,
    'reshape': reshape,
    'grl': grl,
    'detach': detach,
    'entropy': entropy,
}
