# -*- coding: utf-8 -*-

import os
import json
import logging

from ta3n.data.featurefile import load_feature_file
from ta3n.data.record import DataError
from ta3n.data.record import SOURCE
from ta3n.data.record import TARGET
from ta3n.data.synthetic import dataset_name
from ta3n.data.synthetic import SPLITS

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)-15s %(levelname)s %(name)s %(message)s"

FEATURE_SUFFIX = '.feat'

LOGGER_NAMES = ['ta3n',
                'ta3n.ta3nrunner',
                'ta3n.autodiff.tape',
                'ta3n.autodiff.ops',
                'ta3n.autodiff.functional',
                'ta3n.autodiff.gradcheck',
                'ta3n.model.layers',
                'ta3n.model.relation',
                'ta3n.model.attention',
                'ta3n.model.network',
                'ta3n.model.checkpoint',
                'ta3n.losses',
                'ta3n.data.record',
                'ta3n.data.synthetic',
                'ta3n.data.featurefile',
                'ta3n.data.batching',
                'ta3n.train.config',
                'ta3n.train.optimizer',
                'ta3n.train.schedule',
                'ta3n.train.trainer',
                'ta3n.train.gridsearch',
                'ta3n.evaluation.metrics',
                'ta3n.evaluation.mmd',
                'ta3n.evaluation.projection',
                'ta3n.pipeline.task',
                'ta3n.pipeline.util',
                'ta3n.pipeline.gendata',
                'ta3n.pipeline.training',
                'ta3n.pipeline.grid',
                'ta3n.pipeline.evaluation',
                'ta3n.pipeline.dumpfeatures']

LEVELS = {'DEBUG': logging.DEBUG,
          'INFO': logging.INFO,
          'WARNING': logging.WARNING,
          'ERROR': logging.ERROR,
          'CRITICAL': logging.CRITICAL}


def setup_logging(theargs):
    """Sets up the logging for application

    NOTE:  If new modules are added please add their loggers to
    LOGGER_NAMES

    The loglevel is set by theargs.loglevel and the format is set
    by LOG_FORMAT set at the top of this module.
    :param: theargs should have .loglevel set to one of the
    following strings: DEBUG, INFO, WARNING, ERROR, CRITICAL
    """
    theargs.logformat = LOG_FORMAT
    theargs.numericloglevel = LEVELS.get(theargs.loglevel, logging.NOTSET)

    logger.setLevel(theargs.numericloglevel)
    logging.basicConfig(format=theargs.logformat)

    for name in LOGGER_NAMES:
        logging.getLogger(name).setLevel(theargs.numericloglevel)


def feature_file_name(domain, split):
    return dataset_name(domain, split) + FEATURE_SUFFIX


def load_datasets(data_dir, names=None):
    """Loads <domain>_<split>.feat files from `data_dir`

    :param names: dataset names required, every name by default
    :returns: dict of name -> DomainDataset
    :raises DataError: if `data_dir` or a required file is missing
    """
    if data_dir is None or not os.path.isdir(data_dir):
        raise DataError('Data directory ' + str(data_dir) +
                        ' does not exist')
    if names is None:
        names = [dataset_name(d, s) for d in (SOURCE, TARGET)
                 for s in SPLITS]
    datasets = {}
    for name in names:
        path = os.path.join(data_dir, name + FEATURE_SUFFIX)
        if not os.path.isfile(path):
            raise DataError('Missing feature file ' + path)
        datasets[name] = load_feature_file(path)
        logger.debug('Loaded ' + str(len(datasets[name])) + ' videos from ' +
                     path)
    return datasets


def write_json(obj, path):
    """Writes `obj` as JSON with sorted keys and a trailing newline
    """
    with open(path, 'w') as f:
        f.write(json.dumps(obj, sort_keys=True, indent=2) + '\n')


def read_reference_accuracy(path):
    """Gets target accuracy of a stored source only run

    `path` is either a report.json written by train/eval or a
    metrics.jsonl whose last line is used.

    :raises DataError: if the file has no target accuracy
    """
    if path is None:
        return None
    try:
        with open(path, 'r') as f:
            lines = [line for line in f.read().splitlines() if line.strip()]
    except (IOError, OSError) as e:
        raise DataError('Unable to read reference ' + path + ' : ' + str(e))
    if len(lines) == 0:
        raise DataError('Reference ' + path + ' is empty')
    try:
        if path.endswith('.jsonl'):
            record = json.loads(lines[-1])
        else:
            record = json.loads('\n'.join(lines))
    except ValueError as e:
        raise DataError('Reference ' + path + ' is not JSON: ' + str(e))
    for key in ('target_accuracy', 'target_val_accuracy'):
        if record.get(key) is not None:
            return float(record[key])
    raise DataError('Reference ' + path + ' holds no target accuracy')
