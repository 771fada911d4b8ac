# -*- coding: utf-8 -*-

"""Model checkpoints

A checkpoint is a numpy ``.npz`` archive with:

``__config__``
    0-d unicode array holding the JSON encoded ModelConfig.to_dict()
``<module path>``
    one float64 array per parameter, for example ``spatial.0.weight``,
    ``relation.3.0.bias``, ``classifier.0.weight``,
    ``spatial_disc.1.weight``, ``relation_disc.2.0.bias``,
    ``temporal_disc.0.weight`` and ``general_attention.1.bias``
"""

import os
import json
import logging
import numpy as np

from ta3n.model.network import ModelConfig
from ta3n.model.network import Ta3nModel


logger = logging.getLogger(__name__)

CONFIG_KEY = '__config__'
CHECKPOINT_FILE = 'model.npz'


class CheckpointError(Exception):
    """Exception to denote a checkpoint could not be written or read
    """
    pass


def save_checkpoint(model, path):
    """Writes `model` config and parameters to `path`

    :raises CheckpointError: if the file cannot be written
    """
    arrays = {CONFIG_KEY: np.array(json.dumps(model.get_config().to_dict(),
                                              sort_keys=True))}
    for name, param in model.get_named_parameters().items():
        arrays[name] = param.values
    try:
        with open(path, 'wb') as f:
            np.savez(f, **arrays)
    except (IOError, OSError) as e:
        raise CheckpointError('Unable to write checkpoint ' + path +
                              ' : ' + str(e))
    logger.debug('Wrote ' + str(len(arrays) - 1) + ' parameters to ' + path)


def load_checkpoint(path):
    """Rebuilds a Ta3nModel from a checkpoint written by save_checkpoint

    :raises CheckpointError: if the file is missing, lacks a parameter
                             the config implies, or shapes disagree
    :returns: Ta3nModel
    """
    if not os.path.isfile(path):
        raise CheckpointError('Checkpoint ' + path + ' does not exist')
    try:
        archive = np.load(path, allow_pickle=False)
    except (IOError, OSError, ValueError) as e:
        raise CheckpointError('Unable to read checkpoint ' + path +
                              ' : ' + str(e))
    with archive:
        if CONFIG_KEY not in archive.files:
            raise CheckpointError('Checkpoint ' + path + ' has no ' +
                                  CONFIG_KEY + ' entry')
        config = ModelConfig.from_dict(json.loads(str(archive[CONFIG_KEY])))
        model = Ta3nModel(config)
        for name, param in model.get_named_parameters().items():
            if name not in archive.files:
                raise CheckpointError('Checkpoint ' + path +
                                      ' is missing parameter ' + name)
            values = archive[name]
            if values.shape != param.shape:
                raise CheckpointError('Parameter ' + name + ' has shape ' +
                                      str(values.shape) + ' expected ' +
                                      str(param.shape))
            param.set_values(values)
    return model
