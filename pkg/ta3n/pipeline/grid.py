# -*- coding: utf-8 -*-

import logging

from ta3n.pipeline.task import Ta3nTask
from ta3n.pipeline.task import build_train_config
from ta3n.pipeline.training import resolve_data_dir
from ta3n.pipeline.training import CONFIG_FILE
from ta3n.pipeline import util
from ta3n.train.gridsearch import grid_search
from ta3n.train.gridsearch import write_grid_outputs
from ta3n.train.gridsearch import COARSE

logger = logging.getLogger(__name__)


class GridSearchTask(Ta3nTask):
    """Coarse or fine grid search over the loss weights

       Directory is stage.2.grid.<coarse|fine>.  Holds the base
       config.ini, one candidate.NNN directory per distinct weight
       setting, scores.csv, scores.xlsx and best.ini.
    """

    TASK_NAME = 'grid'

    def __init__(self, path, args):
        super(GridSearchTask, self).__init__(path, args)
        self._grid_stage = getattr(args, 'stage', None) or COARSE
        self.set_name(GridSearchTask.TASK_NAME + '.' + self._grid_stage)
        self.set_stage(2)
        self.set_status(Ta3nTask.UNKNOWN_STATUS)
        self._result = None

    def get_grid_stage(self):
        return self._grid_stage

    def get_result(self):
        return self._result

    def _run_work(self):
        args = self.get_args()
        config = build_train_config(args)
        config.write(self.get_file(CONFIG_FILE))
        datasets = util.load_datasets(resolve_data_dir(args))
        jobs = getattr(args, 'jobs', None) or 1
        self._result = grid_search(config, datasets, self._grid_stage,
                                   jobs=jobs,
                                   joint=bool(getattr(args, 'joint', False)),
                                   run_dir=self.get_dir())
        write_grid_outputs(self._result, self.get_dir())
