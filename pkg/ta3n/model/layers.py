# -*- coding: utf-8 -*-

import logging
import numpy as np

from ta3n.autodiff.tape import parameter


logger = logging.getLogger(__name__)

RELU = 'relu'
TANH = 'tanh'


def init_uniform(rng, fan_in, shape):
    """Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] drawn from `rng`
    """
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Linear(object):
    """Affine map x W + b with W of shape in_dim x out_dim
    """

    def __init__(self, name, in_dim, out_dim, rng):
        self._name = name
        self.weight = parameter(init_uniform(rng, in_dim, (in_dim, out_dim)),
                                name=name + '.weight')
        self.bias = parameter(init_uniform(rng, in_dim, (out_dim,)),
                              name=name + '.bias')

    def get_name(self):
        return self._name

    def get_input_dim(self):
        return self.weight.shape[0]

    def get_output_dim(self):
        return self.weight.shape[1]

    def forward(self, tape, x):
        return tape.add(tape.matmul(x, self.weight), self.bias)

    def get_parameters(self):
        return [self.weight, self.bias]


class Mlp(object):
    """Stack of Linear layers

    `activation` is applied between layers and, when
    `final_activation` is True, after the last one too.
    """

    def __init__(self, name, dims, rng, activation=RELU,
                 final_activation=False):
        """Constructor

        :param name: module path used as parameter name prefix
        :param dims: list of layer widths, input first
        :param rng: numpy Generator used for initialization
        """
        self._name = name
        self._activation = activation
        self._final_activation = final_activation
        self._layers = []
        for index in range(len(dims) - 1):
            self._layers.append(Linear(name + '.' + str(index),
                                       dims[index], dims[index + 1], rng))

    def get_name(self):
        return self._name

    def get_layers(self):
        return self._layers

    def get_input_dim(self):
        return self._layers[0].get_input_dim()

    def get_output_dim(self):
        return self._layers[-1].get_output_dim()

    def _activate(self, tape, x):
        if self._activation == TANH:
            return tape.tanh(x)
        return tape.relu(x)

    def forward(self, tape, x):
        last = len(self._layers) - 1
        for index, layer in enumerate(self._layers):
            x = layer.forward(tape, x)
            if index < last or self._final_activation:
                x = self._activate(tape, x)
        return x

    def get_parameters(self):
        params = []
        for layer in self._layers:
            params.extend(layer.get_parameters())
        return params
