# -*- coding: utf-8 -*-

import os
import csv
import logging
import itertools
from collections import OrderedDict
from multiprocessing.dummy import Pool as ThreadPool
import xlsxwriter

from ta3n.model.network import Ta3nModel
from ta3n.model.network import ATTENTION_NONE
from ta3n.train.trainer import train
from ta3n.train.trainer import MetricLog
from ta3n.train.trainer import METRICS_FILE


logger = logging.getLogger(__name__)

COARSE = 'coarse'
FINE = 'fine'
STAGES = [COARSE, FINE]

COARSE_GRID = [0.0, 1e-3, 1e-2, 1e-1, 1.0, 10.0]
FINE_GRID = [0.0, 0.25, 0.5, 0.75, 1.0]
COARSE_HOLD_VALUE = 1.0

WEIGHT_NAMES = ['lambda_s', 'lambda_r', 'lambda_t', 'gamma']
FINE_WEIGHT_NAMES = ['lambda_s', 'lambda_r', 'lambda_t']

SCORE_HEADER = ['candidate', 'stage', 'swept', 'lambda_s', 'lambda_r',
                'lambda_t', 'gamma', 'target_val_accuracy',
                'source_val_accuracy']

BEST_CONFIG_FILE = 'best.ini'
SCORES_CSV = 'scores.csv'
SCORES_XLSX = 'scores.xlsx'


class GridCandidate(object):
    """One weight setting to train and score
    """

    def __init__(self, index, stage, swept, weights):
        self.index = index
        self.stage = stage
        self.swept = swept
        self.weights = OrderedDict((name, float(weights[name]))
                                   for name in WEIGHT_NAMES)
        self.target_accuracy = None
        self.source_accuracy = None

    def get_key(self):
        return tuple(self.weights.values())

    def make_config(self, base_config):
        config = base_config.copy()
        for name, value in self.weights.items():
            config.set_option(name, value)
        config.validate()
        return config

    def to_row(self):
        return ([self.index, self.stage, self.swept] +
                list(self.weights.values()) +
                [self.target_accuracy, self.source_accuracy])


def swept_weights(base_config, stage):
    """Gets weight names that influence the configured model
    """
    names = FINE_WEIGHT_NAMES if stage == FINE else WEIGHT_NAMES
    swept = []
    for name in names:
        if name == 'lambda_s' and not base_config.use_spatial_disc:
            continue
        if name == 'lambda_t' and not base_config.use_temporal_disc:
            continue
        if name == 'lambda_r' and not base_config.get_model_config(
                input_dim=1, num_classes=2).use_relation_disc:
            continue
        if name == 'gamma' and base_config.attention == ATTENTION_NONE:
            continue
        swept.append(name)
    return swept


def coarse_candidates(base_config):
    """Each swept weight over the coarse grid, the others held at 1.0
    """
    swept = swept_weights(base_config, COARSE)
    candidates = []
    for name in swept:
        for value in COARSE_GRID:
            weights = OrderedDict((w, COARSE_HOLD_VALUE if w in swept else 0.0)
                                  for w in WEIGHT_NAMES)
            weights[name] = value
            candidates.append(GridCandidate(len(candidates), COARSE, name,
                                            weights))
    return candidates


def fine_candidates(base_config, joint=False):
    """Lambdas over the fine grid, gamma and unswept weights taken
       from `base_config`

    Coordinatewise by default, the full product grid with `joint`.
    """
    swept = swept_weights(base_config, FINE)
    base = OrderedDict((w, base_config.get_option(w)) for w in WEIGHT_NAMES)
    candidates = []
    if joint:
        for values in itertools.product(FINE_GRID, repeat=len(swept)):
            weights = OrderedDict(base)
            weights.update(zip(swept, values))
            candidates.append(GridCandidate(len(candidates), FINE,
                                            '+'.join(swept), weights))
        return candidates
    for name in swept:
        for value in FINE_GRID:
            weights = OrderedDict(base)
            weights[name] = value
            candidates.append(GridCandidate(len(candidates), FINE, name,
                                            weights))
    return candidates


def _score_key(candidate):
    score = candidate.target_accuracy
    if score is None:
        score = -1.0
    return (-score, sum(candidate.get_key()), candidate.get_key())


def select_best(candidates):
    """Highest target accuracy, ties toward smaller weights
    """
    if len(candidates) == 0:
        return None
    return sorted(candidates, key=_score_key)[0]


class GridResult(object):
    def __init__(self, stage, candidates, best, best_config):
        self.stage = stage
        self.candidates = candidates
        self.best = best
        self.best_config = best_config

    def get_rows(self):
        return [c.to_row() for c in self.candidates]


def run_candidate(config, datasets, run_dir=None):
    """Trains a fresh model with `config` and returns the final report

    :param datasets: dict with source_train, target_train, source_val
                     and target_val DomainDataset objects
    """
    source_train = datasets['source_train']
    model = Ta3nModel(config.get_model_config(
        input_dim=source_train.get_feature_dim(),
        num_classes=source_train.get_num_classes()))
    metric_log = None
    if run_dir is not None:
        if not os.path.isdir(run_dir):
            os.makedirs(run_dir)
        config.write(os.path.join(run_dir, 'config.ini'))
        metric_path = os.path.join(run_dir, METRICS_FILE)
        if os.path.isfile(metric_path):
            os.unlink(metric_path)
        metric_log = MetricLog(metric_path)
    result = train(config, model, source_train, datasets['target_train'],
                   source_val=datasets['source_val'],
                   target_val=datasets['target_val'], metric_log=metric_log)
    return result.get_final_report()


def grid_search(base_config, datasets, stage, jobs=1, joint=False,
                run_dir=None):
    """Trains every candidate of `stage` and picks the best

    All candidates use the seed of `base_config`.  Candidates with
    identical weights are trained once.  Up to `jobs` candidates train
    in parallel; results are merged in candidate order.

    :returns: GridResult
    :raises ValueError: on an unknown stage
    """
    if stage == COARSE:
        candidates = coarse_candidates(base_config)
    elif stage == FINE:
        candidates = fine_candidates(base_config, joint=joint)
    else:
        raise ValueError('Unknown grid stage ' + str(stage) +
                         ' expected one of ' + str(STAGES))
    if len(candidates) == 0:
        candidates = [GridCandidate(0, stage, 'none',
                                    base_config.get_loss_weights().as_dict())]

    unique = OrderedDict()
    for candidate in candidates:
        unique.setdefault(candidate.get_key(), candidate)

    def _run(candidate):
        candidate_dir = None
        if run_dir is not None:
            candidate_dir = os.path.join(run_dir, 'candidate.%03d' %
                                         candidate.index)
        logger.info('Grid ' + stage + ' candidate ' + str(candidate.index) +
                    ' ' + str(dict(candidate.weights)))
        return run_candidate(candidate.make_config(base_config), datasets,
                             candidate_dir)

    pool = ThreadPool(max(1, jobs))
    reports = pool.map(_run, list(unique.values()))
    pool.close()
    pool.join()

    by_key = dict(zip(unique.keys(), reports))
    for candidate in candidates:
        report = by_key[candidate.get_key()]
        candidate.target_accuracy = report.target_accuracy
        candidate.source_accuracy = report.source_accuracy
    best = select_best(candidates)
    logger.info('Best ' + stage + ' candidate ' + str(best.index) + ' ' +
                str(dict(best.weights)) + ' target accuracy ' +
                str(best.target_accuracy))
    return GridResult(stage, candidates, best,
                      best.make_config(base_config))


def write_scores_csv(result, path):
    with open(path, 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(SCORE_HEADER)
        for row in result.get_rows():
            writer.writerow(['' if v is None else v for v in row])


class ScoreSheet(object):
    """Writes grid search scores to an xlsx workbook, best row in bold
    """

    def __init__(self, result):
        self._result = result
        self._work_book = None
        self._header_format = None
        self._body_format = None
        self._best_format = None

    def make_sheet(self, path):
        self._work_book = xlsxwriter.Workbook(path)
        work_sheet = self._work_book.add_worksheet(self._result.stage)
        work_sheet.set_column(0, len(SCORE_HEADER) - 1, 20)
        self._set_formats()
        self._write_header(work_sheet)
        self._write_data(work_sheet)
        self._work_book.close()

    def _set_formats(self):
        self._header_format = self._work_book.add_format()
        self._header_format.set_align('center')
        self._header_format.set_bold(True)
        self._body_format = self._work_book.add_format()
        self._body_format.set_align('center')
        self._best_format = self._work_book.add_format()
        self._best_format.set_align('center')
        self._best_format.set_bold(True)

    def _write_header(self, work_sheet):
        for c, col in enumerate(SCORE_HEADER):
            work_sheet.write_string(0, c, col, self._header_format)

    def _write_data(self, work_sheet):
        best_index = self._result.best.index
        for r, candidate in enumerate(self._result.candidates, start=1):
            cell_format = self._body_format
            if candidate.index == best_index:
                cell_format = self._best_format
            for c, value in enumerate(candidate.to_row()):
                if value is None:
                    work_sheet.write_blank(r, c, None, cell_format)
                elif isinstance(value, str):
                    work_sheet.write_string(r, c, value, cell_format)
                else:
                    work_sheet.write_number(r, c, value, cell_format)


def write_grid_outputs(result, out_dir):
    """Writes scores.csv, scores.xlsx and best.ini to `out_dir`
    """
    write_scores_csv(result, os.path.join(out_dir, SCORES_CSV))
    ScoreSheet(result).make_sheet(os.path.join(out_dir, SCORES_XLSX))
    result.best_config.write(os.path.join(out_dir, BEST_CONFIG_FILE))
