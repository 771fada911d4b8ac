# -*- coding: utf-8 -*-

import os
import logging

from ta3n.pipeline.task import Ta3nTask
from ta3n.pipeline.task import build_train_config
from ta3n.pipeline.gendata import GenDataTask
from ta3n.pipeline import util
from ta3n.model.network import Ta3nModel
from ta3n.model.checkpoint import save_checkpoint
from ta3n.model.checkpoint import CHECKPOINT_FILE
from ta3n.train.trainer import train
from ta3n.train.trainer import MetricLog
from ta3n.train.trainer import METRICS_FILE

logger = logging.getLogger(__name__)

CONFIG_FILE = 'config.ini'
REPORT_FILE = 'report.json'


def resolve_data_dir(args):
    """args.data when set, else the gendata stage of args.out
    """
    data_dir = getattr(args, 'data', None)
    if data_dir is not None:
        return data_dir
    return os.path.join(args.out, GenDataTask(args.out, args).get_dir_name())


class TrainTask(Ta3nTask):
    """Trains one model

       Writes config.ini (the fully resolved configuration) before the
       first step, then metrics.jsonl one line per epoch, model.npz and
       report.json holding the final epoch metrics.
    """

    TASK_NAME = 'train'

    def __init__(self, path, args):
        super(TrainTask, self).__init__(path, args)
        self.set_name(TrainTask.TASK_NAME)
        self.set_stage(2)
        self.set_status(Ta3nTask.UNKNOWN_STATUS)
        self._result = None

    def get_result(self):
        return self._result

    def get_checkpoint_file(self):
        return self.get_file(CHECKPOINT_FILE)

    def get_metrics_file(self):
        return self.get_file(METRICS_FILE)

    def _run_work(self):
        args = self.get_args()
        config = build_train_config(args)
        config.write(self.get_file(CONFIG_FILE))
        datasets = util.load_datasets(resolve_data_dir(args))
        reference = util.read_reference_accuracy(
            getattr(args, 'reference', None))
        source_train = datasets['source_train']
        model = Ta3nModel(config.get_model_config(
            input_dim=source_train.get_feature_dim(),
            num_classes=source_train.get_num_classes()))
        self._result = train(config, model, source_train,
                             datasets['target_train'],
                             source_val=datasets['source_val'],
                             target_val=datasets['target_val'],
                             metric_log=MetricLog(self.get_metrics_file()),
                             reference_accuracy=reference)
        save_checkpoint(model, self.get_checkpoint_file())
        util.write_json(self._result.get_final_report().to_dict(),
                        self.get_file(REPORT_FILE))
