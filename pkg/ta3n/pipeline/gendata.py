# -*- coding: utf-8 -*-

import logging

from ta3n.pipeline.task import Ta3nTask
from ta3n.pipeline import util
from ta3n.data.synthetic import SyntheticShiftSpec
from ta3n.data.synthetic import generate_synthetic
from ta3n.data.featurefile import save_feature_file

logger = logging.getLogger(__name__)


class GenDataTask(Ta3nTask):
    """Generates synthetic source and target feature files

       Reads the [synthetic] spec from args.spec when set, applies
       args.seed, then writes spec.ini and one feature file per
       domain and split.
    """

    TASK_NAME = 'gendata'
    SPEC_FILE = 'spec.ini'

    def __init__(self, path, args):
        super(GenDataTask, self).__init__(path, args)
        self.set_name(GenDataTask.TASK_NAME)
        self.set_stage(1)
        self.set_status(Ta3nTask.UNKNOWN_STATUS)

    def get_spec_file(self):
        return self.get_file(GenDataTask.SPEC_FILE)

    def build_spec(self):
        args = self.get_args()
        overrides = {}
        if getattr(args, 'seed', None) is not None:
            overrides['seed'] = args.seed
        return SyntheticShiftSpec(getattr(args, 'spec', None), **overrides)

    def _run_work(self):
        spec = self.build_spec()
        spec.write(self.get_spec_file())
        datasets = generate_synthetic(spec)
        for name, dataset in datasets.items():
            save_feature_file(dataset, self.get_file(name +
                                                     util.FEATURE_SUFFIX))
        logger.info('Wrote ' + str(len(datasets)) + ' feature files to ' +
                    self.get_dir())
