# -*- coding: utf-8 -*-

import logging
import numpy as np
from scipy.spatial.distance import cdist
from scipy.spatial.distance import pdist


logger = logging.getLogger(__name__)


class MmdError(Exception):
    """Exception to denote MMD cannot be estimated on the given samples
    """
    pass


def rbf_kernel(x, y, bandwidth):
    """exp(-|x - y|^2 / (2 bandwidth^2)) for every pair of rows
    """
    return np.exp(-0.5 * cdist(x, y, 'sqeuclidean') / bandwidth ** 2)


def median_bandwidth(x, y):
    """Median of the pairwise euclidean distances of the pooled samples

    :raises MmdError: if the median is 0
    """
    pooled = np.concatenate([x, y])
    bandwidth = float(np.median(pdist(pooled, 'euclidean')))
    if not bandwidth > 0:
        raise MmdError('Degenerate bandwidth: median pairwise distance of ' +
                       str(len(pooled)) + ' pooled points is 0')
    return bandwidth


def _off_diagonal_mean(kernel):
    count = kernel.shape[0]
    return (np.sum(kernel) - np.trace(kernel)) / (count * (count - 1))


def _canonical(x, y):
    """Orders the two sample sets so mmd(x, y) and mmd(y, x) run the
       same arithmetic
    """
    if (x.shape, x.tobytes()) <= (y.shape, y.tobytes()):
        return x, y
    return y, x


def mmd(x, y, bandwidth=None, return_bandwidth=False):
    """Unbiased squared MMD with an RBF kernel

    :param x: N x F samples
    :param y: M x F samples
    :param bandwidth: kernel bandwidth, median heuristic when None
    :param return_bandwidth: if True returns (value, bandwidth)
    :raises MmdError: if N or M < 2 or the bandwidth degenerates
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    if len(x) < 2 or len(y) < 2:
        raise MmdError('MMD needs at least 2 samples per set, got ' +
                       str(len(x)) + ' and ' + str(len(y)))
    if x.shape[1] != y.shape[1]:
        raise MmdError('Sample dimensions differ: ' + str(x.shape[1]) +
                       ' and ' + str(y.shape[1]))
    x, y = _canonical(x, y)
    if bandwidth is None:
        bandwidth = median_bandwidth(x, y)
    value = (_off_diagonal_mean(rbf_kernel(x, x, bandwidth)) +
             _off_diagonal_mean(rbf_kernel(y, y, bandwidth)) -
             2.0 * np.mean(rbf_kernel(x, y, bandwidth)))
    logger.debug('MMD ' + str(value) + ' with bandwidth ' + str(bandwidth))
    if return_bandwidth:
        return float(value), bandwidth
    return float(value)
