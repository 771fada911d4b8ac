# -*- coding: utf-8 -*-

import logging
from collections import OrderedDict
import numpy as np

from ta3n.autodiff.tape import Tape
from ta3n.autodiff.tape import backward
from ta3n.autodiff.tape import zero_grad
from ta3n.data.record import stack_frames
from ta3n.model.network import ATTENTION_DOMAIN
from ta3n.model.network import TEMRELATION
from ta3n.model.network import NUM_DOMAINS
from ta3n.model.layers import Mlp
from ta3n.losses import temporal_domain_loss
from ta3n.train.optimizer import OptimizerState
from ta3n.train.optimizer import sgd_step
from ta3n.evaluation.mmd import mmd
from ta3n.evaluation.mmd import MmdError


logger = logging.getLogger(__name__)

EVAL_BATCH_SIZE = 256
HISTOGRAM_BINS = 10

MEASURE_SEED = 0
MEASURE_FOLDS = 2
MEASURE_STEPS = 300
MEASURE_LR = 0.1
MEASURE_WEIGHT_DECAY = 1e-3


class EvaluationError(Exception):
    """Exception to denote a metric cannot be computed
    """
    pass


class CollectedOutputs(object):
    """Forward results over a whole dataset, as numpy arrays
    """

    def __init__(self, video_ids, labels, domains, class_logits,
                 temporal_domain_logits, attention_weights, video_features):
        self.video_ids = video_ids
        self.labels = labels
        self.domains = domains
        self.class_logits = class_logits
        self.temporal_domain_logits = temporal_domain_logits
        self.attention_weights = attention_weights
        self.video_features = video_features

    def __len__(self):
        return len(self.video_ids)


def _concat(chunks):
    if len(chunks) == 0 or chunks[0] is None:
        return None
    return np.concatenate(chunks)


def collect_outputs(model, dataset, batch_size=EVAL_BATCH_SIZE):
    """Runs `model` over `dataset` in chunks of `batch_size`

    :raises EvaluationError: if the dataset is empty
    """
    records = list(dataset.get_records())
    if len(records) == 0:
        raise EvaluationError('Cannot evaluate an empty dataset')
    k_frames = model.get_config().num_frames
    pieces = OrderedDict((name, []) for name in
                         ('labels', 'domains', 'class_logits',
                          'temporal_domain_logits', 'attention_weights',
                          'video_features'))
    for start in range(0, len(records), batch_size):
        chunk = records[start:start + batch_size]
        frames, labels, domains = stack_frames(chunk, k_frames)
        out = model.forward(Tape(), frames)
        pieces['labels'].append(labels)
        pieces['domains'].append(domains)
        pieces['class_logits'].append(out.class_logits.values)
        pieces['video_features'].append(out.video_feature.values)
        pieces['temporal_domain_logits'].append(
            None if out.temporal_domain_logits is None
            else out.temporal_domain_logits.values)
        pieces['attention_weights'].append(
            None if out.attention_weights is None
            else out.attention_weights.values)
    return CollectedOutputs([r.get_video_id() for r in records],
                            *[_concat(v) for v in pieces.values()])


def accuracy_from_logits(class_logits, labels):
    """Fraction of rows whose argmax equals the label, first max wins
    """
    labels = np.asarray(labels)
    if labels.size == 0:
        raise EvaluationError('No videos to score')
    if np.any(labels < 0):
        raise EvaluationError('Accuracy needs every video labeled')
    predicted = np.argmax(class_logits, axis=1)
    return float(np.mean(predicted == labels))


def accuracy(model, dataset):
    """Fraction of videos of `dataset` predicted correctly

    :raises EvaluationError: if the dataset is not labeled
    """
    if not dataset.is_labeled():
        raise EvaluationError('Accuracy needs a labeled dataset')
    collected = collect_outputs(model, dataset)
    return accuracy_from_logits(collected.class_logits, collected.labels)


def _mean_cross_entropy(logits, labels):
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    log_probs = shifted - np.log(np.sum(np.exp(shifted), axis=1,
                                        keepdims=True))
    return float(-np.mean(log_probs[np.arange(len(labels)), labels]))


def _standardize(features):
    mean = np.mean(features, axis=0)
    std = np.std(features, axis=0)
    std[std < 1e-12] = 1.0
    return (features - mean) / std


def _domain_folds(domains, folds, rng):
    """Fold index per video, each domain dealt round robin after a shuffle
    """
    assignment = np.zeros(len(domains), dtype=np.int64)
    for domain in np.unique(domains):
        members = np.flatnonzero(domains == domain)
        members = members[rng.permutation(len(members))]
        assignment[members] = np.arange(len(members)) % folds
    return assignment


def _fit_discriminator(features, domains, seed):
    """Fits a F -> F/2 -> 2 discriminator on frozen `features` with
       full batch momentum SGD
    """
    dim = features.shape[1]
    disc = Mlp('measurement_disc', [dim, max(1, dim // 2), NUM_DOMAINS],
               np.random.default_rng(seed))
    params = disc.get_parameters()
    state = OptimizerState(params, total_steps=MEASURE_STEPS)
    for _ in range(MEASURE_STEPS):
        tape = Tape()
        loss = temporal_domain_loss(
            tape, disc.forward(tape, tape.constant(features)), domains)
        zero_grad(params)
        backward(loss)
        sgd_step(params, state, MEASURE_LR, momentum=0.9,
                 weight_decay=MEASURE_WEIGHT_DECAY)
    return disc


def _disc_logits(disc, features):
    tape = Tape()
    return disc.forward(tape, tape.constant(features)).values


def measured_domain_loss(features, domains, seed=MEASURE_SEED,
                         folds=MEASURE_FOLDS):
    """Held out video level domain cross-entropy of discriminators fit
       on frozen `features`

    Features are standardized, then split into `folds` folds that each
    hold videos of both domains.  A fresh discriminator with the shape
    of the temporal domain discriminator is fit on all other folds and
    scored on the held out one.  Well separated domains give a value
    near 0, indistinguishable domains a value near ln 2.  When a domain
    has fewer videos than `folds` the discriminator is fit and scored
    on all videos.

    :param features: N x F final video features
    :param domains: N domain labels
    :raises EvaluationError: unless both domains are present
    """
    features = np.asarray(features, dtype=np.float64)
    domains = np.asarray(domains, dtype=np.int64)
    counts = np.bincount(domains, minlength=NUM_DOMAINS)
    if np.any(counts == 0):
        raise EvaluationError('Domain loss needs videos of both domains')
    features = _standardize(features)
    if np.min(counts) < folds:
        disc = _fit_discriminator(features, domains, [seed, 0])
        logits = _disc_logits(disc, features)
        return _mean_cross_entropy(logits, domains)
    assignment = _domain_folds(domains, folds,
                               np.random.default_rng([seed, len(domains)]))
    logits = np.zeros((len(domains), NUM_DOMAINS))
    for fold in range(folds):
        held_out = assignment == fold
        disc = _fit_discriminator(features[~held_out], domains[~held_out],
                                  [seed, fold])
        logits[held_out] = _disc_logits(disc, features[held_out])
    return _mean_cross_entropy(logits, domains)


def domain_loss_from_outputs(collected_list, seed=MEASURE_SEED):
    features = np.concatenate([c.video_features for c in collected_list])
    domains = np.concatenate([c.domains for c in collected_list])
    return measured_domain_loss(features, domains, seed=seed)


def domain_loss_metric(model, datasets, seed=MEASURE_SEED):
    """Video level domain loss of the final video features of `model`
       over every dataset in `datasets`

    The features are frozen and scored by measured_domain_loss(), so
    the value does not depend on whether or how the model's own domain
    discriminators were trained.  Higher means a smaller domain gap.
    """
    return domain_loss_from_outputs([collect_outputs(model, d)
                                     for d in datasets], seed=seed)


def attention_labels(model):
    cfg = model.get_config()
    if cfg.variant == TEMRELATION:
        return ['scale' + str(n) for n in cfg.get_scales()]
    return ['frame' + str(j) for j in range(cfg.num_frames)]


def summarize_attention(weights, labels):
    """Per column mean, min, max and a 10 bin histogram over [0, 1]
    """
    summary = OrderedDict()
    edges = np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1)
    for index, label in enumerate(labels):
        column = weights[:, index]
        histogram, _ = np.histogram(np.clip(column, 0.0, 1.0), bins=edges)
        summary[label] = OrderedDict([('mean', float(np.mean(column))),
                                      ('min', float(np.min(column))),
                                      ('max', float(np.max(column))),
                                      ('histogram',
                                       [int(h) for h in histogram])])
    return summary


def attention_summary(model, dataset):
    """Statistics of the domain attention weight of every scale
       (or frame for TemPooling) over `dataset`

    :raises EvaluationError: unless the model uses domain attention
    """
    if model.get_config().attention_mode != ATTENTION_DOMAIN:
        raise EvaluationError('Attention summary needs domain attention, '
                              'model uses ' +
                              model.get_config().attention_mode)
    collected = collect_outputs(model, dataset)
    return summarize_attention(collected.attention_weights,
                               attention_labels(model))


class MetricsReport(object):
    """Metrics of one model on the source and target validation sets
    """

    def __init__(self):
        self.epoch = None
        self.source_accuracy = None
        self.target_accuracy = None
        self.reference_accuracy = None
        self.gain = None
        self.domain_loss = None
        self.mmd = None
        self.mmd_bandwidth = None
        self.attention_stats = None
        self.losses = None

    def set_reference_accuracy(self, reference):
        """Sets source only reference and updates gain
        """
        self.reference_accuracy = reference
        if reference is not None and self.target_accuracy is not None:
            self.gain = self.target_accuracy - reference

    def to_dict(self):
        values = OrderedDict()
        for name in ('epoch', 'source_accuracy', 'target_accuracy',
                     'reference_accuracy', 'gain', 'domain_loss', 'mmd',
                     'mmd_bandwidth', 'attention_stats', 'losses'):
            value = getattr(self, name)
            if value is not None:
                values[name] = value
        return values


def evaluate(model, source, target, reference_accuracy=None):
    """Builds a MetricsReport from the validation datasets

    Domain loss, MMD and attention statistics are left unset when the
    model or data cannot provide them.
    """
    report = MetricsReport()
    src = collect_outputs(model, source)
    tgt = collect_outputs(model, target)
    if source.is_labeled():
        report.source_accuracy = accuracy_from_logits(src.class_logits,
                                                      src.labels)
    if target.is_labeled():
        report.target_accuracy = accuracy_from_logits(tgt.class_logits,
                                                      tgt.labels)
    report.set_reference_accuracy(reference_accuracy)
    try:
        report.domain_loss = domain_loss_from_outputs([src, tgt])
    except EvaluationError as e:
        logger.warning('Skipping domain loss: ' + str(e))
    try:
        report.mmd, report.mmd_bandwidth = mmd(src.video_features,
                                               tgt.video_features,
                                               return_bandwidth=True)
    except MmdError as e:
        logger.warning('Skipping MMD: ' + str(e))
    if model.get_config().attention_mode == ATTENTION_DOMAIN:
        pooled = np.concatenate([src.attention_weights,
                                 tgt.attention_weights])
        report.attention_stats = summarize_attention(pooled,
                                                     attention_labels(model))
    return report

