# -*- coding: utf-8 -*-

import json
import logging
from collections import OrderedDict
import numpy as np

from ta3n.autodiff.tape import Tape
from ta3n.autodiff.tape import backward
from ta3n.autodiff.tape import zero_grad
from ta3n.data.batching import make_batches
from ta3n.data.batching import batches_per_epoch
from ta3n.losses import total_loss
from ta3n.model.network import ATTENTION_NONE
from ta3n.train.config import TrainConfig
from ta3n.train.optimizer import OptimizerState
from ta3n.train.optimizer import sgd_step
from ta3n.train.schedule import lr_schedule
from ta3n.train.schedule import grl_lambda_schedule
from ta3n.evaluation.metrics import evaluate
from ta3n.evaluation.metrics import MetricsReport


logger = logging.getLogger(__name__)

METRICS_FILE = 'metrics.jsonl'


class NumericalAbortError(Exception):
    """Exception to denote a non finite loss or gradient

    `epoch` and `batch` identify the offending step.
    """
    def __init__(self, epoch, batch, message):
        super(NumericalAbortError, self).__init__(
            'Epoch ' + str(epoch) + ' batch ' + str(batch) + ': ' + message)
        self.epoch = epoch
        self.batch = batch


class MetricLog(object):
    """Appends one JSON object per line to a file, keys sorted
    """

    def __init__(self, path):
        self._path = path

    def get_path(self):
        return self._path

    def append(self, record):
        with open(self._path, 'a') as f:
            f.write(json.dumps(record, sort_keys=True) + '\n')

    @staticmethod
    def read(path):
        """Gets list of dicts, one per line of `path`
        """
        records = []
        with open(path, 'r') as f:
            for line in f:
                if line.strip():
                    records.append(json.loads(line))
        return records


class TrainResult(object):
    """Trained model plus one MetricsReport per epoch
    """

    def __init__(self, model, reports):
        self.model = model
        self.reports = reports

    def get_final_report(self):
        if len(self.reports) == 0:
            return None
        return self.reports[-1]


def _training_streams(config, source_train, target_train):
    """Gets (labeled, unlabeled) datasets for the configured protocol
    """
    if config.supervised_domain == TrainConfig.TARGET:
        return target_train, None
    return source_train, target_train


def _check_gradients(params, epoch, index):
    for p in params:
        if not np.all(np.isfinite(p.grad)):
            raise NumericalAbortError(epoch, index, 'non finite gradient '
                                      'for ' + str(p.get_name()))


def train_step(config, model, batch, state):
    """Runs forward, loss, backward and one SGD step on `batch`

    :returns: tuple (LossBreakdown, lr, grl lambda)
    :raises NumericalAbortError: on a non finite loss or gradient
    """
    p = state.get_progress()
    lr = lr_schedule(p, config.lr0, config.alpha, config.beta)
    grl_lambda = float(grl_lambda_schedule(p, config.grl_ramp))
    model.get_grl_config().set_lambda(grl_lambda)

    frames, labels, domains = batch.get_arrays(config.k_frames)
    tape = Tape()
    outputs = model.forward(tape, frames)
    attentive = model.get_config().attention_mode != ATTENTION_NONE
    breakdown = total_loss(tape, outputs, labels, domains,
                           config.get_loss_weights(),
                           num_frames=config.k_frames,
                           attentive_entropy=attentive)
    if not breakdown.is_finite():
        raise NumericalAbortError(batch.get_epoch(), batch.get_index(),
                                  'non finite loss ' +
                                  str(breakdown.get_component_values()))
    params = model.get_parameters()
    zero_grad(params)
    backward(breakdown.total)
    _check_gradients(params, batch.get_epoch(), batch.get_index())
    sgd_step(params, state, lr, config.momentum, config.weight_decay)
    return breakdown, lr, grl_lambda


def train(config, model, source_train, target_train, source_val=None,
          target_val=None, metric_log=None, reference_accuracy=None):
    """Trains `model` in place

    :param config: TrainConfig
    :param model: Ta3nModel built from config.get_model_config()
    :param metric_log: optional MetricLog receiving one line per epoch
    :param reference_accuracy: source only target accuracy for gain
    :returns: TrainResult
    :raises NumericalAbortError: naming epoch and batch of a non
                                 finite loss
    """
    labeled, unlabeled = _training_streams(config, source_train,
                                           target_train)
    per_epoch = batches_per_epoch(len(labeled), config.source_batch)
    params = model.get_parameters()
    state = OptimizerState(params, total_steps=config.epochs * per_epoch)
    reports = []
    logger.info('Training ' + str(len(params)) + ' parameters for ' +
                str(config.epochs) + ' epochs of ' + str(per_epoch) +
                ' batches')
    for epoch in range(config.epochs):
        sums = OrderedDict()
        lr = grl_lambda = None
        for batch in make_batches(labeled, unlabeled, config.source_batch,
                                  config.seed, epoch=epoch):
            breakdown, lr, grl_lambda = train_step(config, model, batch,
                                                   state)
            for name, value in breakdown.get_component_values().items():
                sums[name] = sums.get(name, 0.0) + value
            logger.debug('Epoch ' + str(epoch) + ' batch ' +
                         str(batch.get_index()) + ' total ' +
                         str(sums['total']))
        losses = OrderedDict((name, value / per_epoch)
                             for name, value in sums.items())

        if source_val is not None and target_val is not None:
            report = evaluate(model, source_val, target_val,
                              reference_accuracy=reference_accuracy)
        else:
            report = MetricsReport()
        report.epoch = epoch
        report.losses = losses
        reports.append(report)

        record = OrderedDict([('epoch', epoch), ('lr', lr),
                              ('grl_lambda', grl_lambda)])
        record.update(losses)
        record['source_val_accuracy'] = report.source_accuracy
        record['target_val_accuracy'] = report.target_accuracy
        record['domain_loss'] = report.domain_loss
        record['mmd'] = report.mmd
        if metric_log is not None:
            metric_log.append(record)
        logger.info('Epoch ' + str(epoch) + ' lr ' + str(lr) +
                    ' grl ' + str(grl_lambda) + ' total ' +
                    str(losses.get('total')) + ' source acc ' +
                    str(report.source_accuracy) + ' target acc ' +
                    str(report.target_accuracy))
    return TrainResult(model, reports)
