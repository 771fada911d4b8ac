# -*- coding: utf-8 -*-

import csv
import logging
import numpy as np

from ta3n.data.record import FrameFeatureRecord
from ta3n.data.record import DomainDataset
from ta3n.data.featurefile import save_feature_file
from ta3n.evaluation.metrics import collect_outputs
from ta3n.evaluation.metrics import EvaluationError


logger = logging.getLogger(__name__)

PROJECTION_HEADER = ['video_id', 'domain', 'label', 'x', 'y']


class Projection(object):
    """Top-2 principal axis coordinates plus their variance share
    """

    def __init__(self, coordinates, axes, explained_share):
        self.coordinates = coordinates
        self.axes = axes
        self.explained_share = explained_share


def project_2d(features):
    """Projects N x F features onto their top two principal axes

    Features are centered, axes ordered by decreasing eigenvalue of the
    covariance and each axis sign chosen so its largest magnitude
    loading is positive.  With F = 1 the second coordinate is 0.

    :raises EvaluationError: if there are no features
    """
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if features.shape[0] == 0:
        raise EvaluationError('Cannot project an empty feature set')
    centered = features - np.mean(features, axis=0)
    covariance = centered.T.dot(centered) / max(1, features.shape[0] - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    eigenvectors = eigenvectors[:, order]
    count = min(2, eigenvectors.shape[1])
    axes = np.zeros((features.shape[1], 2))
    for k in range(count):
        axis = eigenvectors[:, k]
        if axis[np.argmax(np.abs(axis))] < 0:
            axis = -axis
        axes[:, k] = axis
    total = np.sum(eigenvalues)
    share = float(np.sum(eigenvalues[:count]) / total) if total > 0 else 1.0
    return Projection(centered.dot(axes), axes, share)


def dump_features(model, datasets, path):
    """Writes the video feature of every record to a feature file

    Each output record keeps video id, domain and label and holds one
    frame: the F dimensional video feature.

    :param datasets: list of DomainDataset
    :returns: DomainDataset that was written
    """
    records = []
    class_names = []
    for dataset in datasets:
        class_names = class_names or dataset.get_class_names()
        collected = collect_outputs(model, dataset)
        for record, feature in zip(dataset.get_records(),
                                   collected.video_features):
            records.append(FrameFeatureRecord(record.get_video_id(),
                                              record.get_domain(),
                                              record.get_label(),
                                              feature.reshape(1, -1)))
    dumped = DomainDataset(records,
                           feature_dim=model.get_config().feature_dim,
                           class_names=class_names)
    save_feature_file(dumped, path)
    logger.info('Dumped ' + str(len(records)) + ' video features to ' + path)
    return dumped


def write_projection_csv(dumped, path):
    """Projects the features of `dumped` and writes one csv row per video

    :returns: Projection
    :raises EvaluationError: if `path` cannot be written
    """
    features = np.concatenate([r.get_frames() for r in dumped.get_records()])
    projection = project_2d(features)
    try:
        with open(path, 'w') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(PROJECTION_HEADER)
            for record, (x, y) in zip(dumped.get_records(),
                                      projection.coordinates):
                label = record.get_label()
                writer.writerow([record.get_video_id(), record.get_domain(),
                                 '' if label is None else label,
                                 repr(float(x)), repr(float(y))])
    except (IOError, OSError) as e:
        raise EvaluationError('Unable to write ' + path + ' : ' + str(e))
    return projection
