# -*- coding: utf-8 -*-

import logging
import numpy as np


logger = logging.getLogger(__name__)


class AutodiffError(Exception):
    """base exception class for all the other exceptions provided by
       the autodiff package.
    """
    pass


class ShapeError(AutodiffError):
    """Exception to denote input shapes do not conform to an operation
    """
    pass


class NonScalarLossError(AutodiffError):
    """Exception to denote backward() was called on a non scalar value
    """
    pass


class DistributionError(AutodiffError):
    """Exception to denote a probability vector is not normalized
    """
    pass


class LabelRangeError(AutodiffError):
    """Exception to denote a class label is out of range
    """
    pass


def _as_array(values):
    return np.array(values, dtype=np.float64)


class DifferentiableValue(object):
    """Node of a reverse-mode computation tape

    Holds `values` and a `grad` array of the same shape.  Leaves
    (parameters and constants) have no tape and no parents; every
    other node is created by a `Tape` operation which also stores the
    vector-Jacobian product used by backward().
    """

    def __init__(self, values, requires_grad=False, name=None,
                 provenance='leaf'):
        """Constructor

        :param values: anything numpy can turn into a float64 array
        :param requires_grad: if True gradients are accumulated in
                              `grad` during backward()
        :param name: optional name, used for parameters
        :param provenance: identifier of the operation that produced
                           this value
        """
        self.values = _as_array(values)
        self.grad = np.zeros_like(self.values)
        self.requires_grad = requires_grad
        self._name = name
        self._provenance = provenance
        self._tape = None
        self._parents = ()
        self._vjp = None

    @property
    def shape(self):
        return self.values.shape

    def get_name(self):
        return self._name

    def set_name(self, name):
        self._name = name

    def get_provenance(self):
        return self._provenance

    def get_tape(self):
        return self._tape

    def get_parents(self):
        return self._parents

    def zero_grad(self):
        """Resets `grad` to zeros of the same shape as `values`
        """
        self.grad = np.zeros_like(self.values)

    def set_values(self, values):
        """Replaces `values`, resetting `grad`

        :raises ShapeError: if the new values change shape
        """
        new_values = _as_array(values)
        if new_values.shape != self.values.shape:
            raise ShapeError('Cannot change shape of ' + str(self._name) +
                             ' from ' + str(self.values.shape) + ' to ' +
                             str(new_values.shape))
        self.values = new_values
        self.zero_grad()

    def __repr__(self):
        return ('DifferentiableValue(name=' + str(self._name) +
                ', provenance=' + self._provenance +
                ', shape=' + str(self.shape) + ')')


def parameter(values, name=None):
    """Creates a trainable leaf
    """
    return DifferentiableValue(values, requires_grad=True, name=name)


def zero_grad(params):
    """Calls zero_grad() on every value in `params`
    """
    for p in params:
        p.zero_grad()


class Tape(object):
    """Single owner record of operations in creation order

    Creation order is a topological order of the graph so backward()
    walks it in reverse.  Two switches exist for verification:

    `reverse_gradients` set to False makes gradient reversal nodes
    pass gradients straight through.

    `replay` is a list of arrays returned, in order, by detach()
    instead of the detached input, so a perturbed evaluation sees
    the stop-gradient constants of a base evaluation.
    """

    def __init__(self, reverse_gradients=True, replay=None):
        self._nodes = []
        self._reverse_gradients = reverse_gradients
        self._replay = replay
        self._detached = []

    def get_nodes(self):
        return self._nodes

    def is_reversing_gradients(self):
        return self._reverse_gradients

    def get_detached_values(self):
        """Gets list of arrays produced by detach() on this tape
        """
        return self._detached

    def _next_detached(self, values):
        if self._replay is None:
            self._detached.append(values)
            return values
        index = len(self._detached)
        if index >= len(self._replay):
            raise AutodiffError('Replay has ' + str(len(self._replay)) +
                                ' detached values but graph requested more')
        replayed = self._replay[index]
        if replayed.shape != values.shape:
            raise ShapeError('Replayed detached value ' + str(index) +
                             ' has shape ' + str(replayed.shape) +
                             ' expected ' + str(values.shape))
        self._detached.append(replayed)
        return replayed

    def constant(self, values):
        """Creates a leaf that never receives gradients
        """
        return DifferentiableValue(values, requires_grad=False,
                                   provenance='constant')

    def record(self, kind, values, parents, vjp):
        """Appends a node produced by operation `kind` to this tape

        :param kind: operation name, stored as provenance
        :param values: output array
        :param parents: input DifferentiableValue objects
        :param vjp: function mapping output gradient to a sequence of
                    input gradients (None entries allowed)
        :returns: the new DifferentiableValue
        """
        out = DifferentiableValue(values, provenance=kind)
        out.requires_grad = any(p.requires_grad for p in parents)
        out._tape = self
        out._parents = tuple(parents)
        if out.requires_grad:
            out._vjp = vjp
        self._nodes.append(out)
        return out

    def forward_op(self, kind, inputs, **attrs):
        """Runs registered operation `kind` on `inputs`

        :raises AutodiffError: if `kind` is unknown
        :raises ShapeError: if input shapes do not conform
        """
        from ta3n.autodiff.ops import OPERATIONS
        try:
            op = OPERATIONS[kind]
        except KeyError:
            raise AutodiffError('Unknown operation: ' + str(kind))
        return op(self, list(inputs), **attrs)

    def matmul(self, a, b):
        return self.forward_op('matmul', [a, b])

    def add(self, a, b):
        return self.forward_op('add', [a, b])

    def multiply(self, a, b):
        return self.forward_op('multiply', [a, b])

    def relu(self, a):
        return self.forward_op('relu', [a])

    def tanh(self, a):
        return self.forward_op('tanh', [a])

    def mean_axis(self, a, axis):
        return self.forward_op('mean_axis', [a], axis=axis)

    def sum_axis(self, a, axis):
        return self.forward_op('sum_axis', [a], axis=axis)

    def concat(self, inputs, axis=-1):
        return self.forward_op('concat', inputs, axis=axis)

    def scale(self, a, factor):
        return self.forward_op('scale', [a], factor=factor)

    def log_softmax(self, a, axis=-1):
        return self.forward_op('log_softmax', [a], axis=axis)

    def softmax(self, a, axis=-1):
        return self.forward_op('softmax', [a], axis=axis)

    def take(self, a, indices, axis=0):
        return self.forward_op('take', [a], indices=indices, axis=axis)

    def reshape(self, a, shape):
        return self.forward_op('reshape', [a], shape=shape)

    def detach(self, a):
        return self.forward_op('detach', [a])


def backward(loss):
    """Accumulates d(loss)/d(node) into `grad` of every node the loss
       depends on

       Repeated calls without zero_grad() accumulate.

    :param loss: scalar DifferentiableValue produced on a Tape
    :raises NonScalarLossError: if loss has more than one element
    """
    if loss.values.size != 1:
        raise NonScalarLossError('backward() needs a scalar loss, got shape ' +
                                 str(loss.shape))
    tape = loss.get_tape()
    if tape is None:
        loss.grad = loss.grad + np.ones_like(loss.values)
        return

    nodes = tape.get_nodes()
    upstream = {id(loss): np.ones_like(loss.values)}
    end = None
    for index in range(len(nodes) - 1, -1, -1):
        if nodes[index] is loss:
            end = index
            break
    if end is None:
        raise AutodiffError('Loss is not recorded on its tape')

    for index in range(end, -1, -1):
        node = nodes[index]
        g = upstream.pop(id(node), None)
        if g is None:
            continue
        node.grad = node.grad + g
        if node._vjp is None:
            continue
        parent_grads = node._vjp(g)
        for parent, pg in zip(node._parents, parent_grads):
            if pg is None or not parent.requires_grad:
                continue
            if parent.get_tape() is tape:
                key = id(parent)
                if key in upstream:
                    upstream[key] = upstream[key] + pg
                else:
                    upstream[key] = pg
            else:
                parent.grad = parent.grad + pg
