# -*- coding: utf-8 -*-

import logging

from ta3n.pipeline.task import Ta3nTask
from ta3n.pipeline.training import resolve_data_dir
from ta3n.pipeline.evaluation import resolve_checkpoint
from ta3n.pipeline import util
from ta3n.model.checkpoint import load_checkpoint
from ta3n.evaluation.projection import dump_features
from ta3n.evaluation.projection import write_projection_csv

logger = logging.getLogger(__name__)


class DumpFeaturesTask(Ta3nTask):
    """Writes final video features of both validation sets

       features.feat uses the feature file layout with one F
       dimensional frame per video.  projection.csv holds the 2D
       principal axis coordinates and projection.json their
       explained variance share.
    """

    TASK_NAME = 'dumpfeatures'
    FEATURES_FILE = 'features' + util.FEATURE_SUFFIX
    PROJECTION_CSV = 'projection.csv'
    PROJECTION_JSON = 'projection.json'

    def __init__(self, path, args):
        super(DumpFeaturesTask, self).__init__(path, args)
        self.set_name(DumpFeaturesTask.TASK_NAME)
        self.set_stage(4)
        self.set_status(Ta3nTask.UNKNOWN_STATUS)

    def _run_work(self):
        args = self.get_args()
        model = load_checkpoint(resolve_checkpoint(args))
        datasets = util.load_datasets(resolve_data_dir(args),
                                      names=['source_val', 'target_val'])
        dumped = dump_features(model, [datasets['source_val'],
                                       datasets['target_val']],
                               self.get_file(DumpFeaturesTask.FEATURES_FILE))
        projection = write_projection_csv(
            dumped, self.get_file(DumpFeaturesTask.PROJECTION_CSV))
        util.write_json({'explained_share': projection.explained_share,
                         'record_count': len(dumped)},
                        self.get_file(DumpFeaturesTask.PROJECTION_JSON))
