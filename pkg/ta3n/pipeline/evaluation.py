# -*- coding: utf-8 -*-

import os
import logging

from ta3n.pipeline.task import Ta3nTask
from ta3n.pipeline.training import TrainTask
from ta3n.pipeline.training import resolve_data_dir
from ta3n.pipeline.training import REPORT_FILE
from ta3n.pipeline import util
from ta3n.model.checkpoint import load_checkpoint
from ta3n.model.checkpoint import CHECKPOINT_FILE
from ta3n.evaluation.metrics import evaluate

logger = logging.getLogger(__name__)


def resolve_checkpoint(args):
    """args.checkpoint when set, else model.npz of the train stage
    """
    checkpoint = getattr(args, 'checkpoint', None)
    if checkpoint is not None:
        return checkpoint
    return os.path.join(TrainTask(args.out, args).get_dir(), CHECKPOINT_FILE)


class EvaluationTask(Ta3nTask):
    """Scores a checkpoint on the source and target validation sets

       Writes report.json with accuracies, gain, domain loss, MMD and
       attention statistics.
    """

    TASK_NAME = 'evaluation'

    def __init__(self, path, args):
        super(EvaluationTask, self).__init__(path, args)
        self.set_name(EvaluationTask.TASK_NAME)
        self.set_stage(3)
        self.set_status(Ta3nTask.UNKNOWN_STATUS)
        self._report = None

    def get_report(self):
        return self._report

    def get_report_file(self):
        return self.get_file(REPORT_FILE)

    def _run_work(self):
        args = self.get_args()
        model = load_checkpoint(resolve_checkpoint(args))
        datasets = util.load_datasets(resolve_data_dir(args),
                                      names=['source_val', 'target_val'])
        reference = util.read_reference_accuracy(
            getattr(args, 'reference', None))
        self._report = evaluate(model, datasets['source_val'],
                                datasets['target_val'],
                                reference_accuracy=reference)
        util.write_json(self._report.to_dict(), self.get_report_file())
