#! /usr/bin/env python

import sys
import os
import json
import argparse
import psutil
import logging
from lockfile.pidlockfile import PIDLockFile
import ta3n
from ta3n.pipeline.task import Ta3nParameters
from ta3n.pipeline.task import Ta3nTask
from ta3n.pipeline.task import EXIT_OK
from ta3n.pipeline.task import EXIT_UNEXPECTED
from ta3n.pipeline import util
from ta3n.pipeline.gendata import GenDataTask
from ta3n.pipeline.training import TrainTask
from ta3n.pipeline.grid import GridSearchTask
from ta3n.pipeline.evaluation import EvaluationTask
from ta3n.pipeline.dumpfeatures import DumpFeaturesTask
from ta3n.train.config import TrainConfig
from ta3n.model.network import VARIANTS
from ta3n.model.network import ATTENTION_MODES
from ta3n.train.gridsearch import COARSE
from ta3n.train.gridsearch import FINE


# create logger
logger = logging.getLogger('ta3n.ta3nrunner')
DEFAULT_LOG_LEVEL = 'WARNING'

GEN_DATA = 'gen-data'
TRAIN = 'train'
EVAL = 'eval'
GRID = 'grid'
DUMP_FEATURES = 'dump-features'

COMMANDS = [GEN_DATA, TRAIN, EVAL, GRID, DUMP_FEATURES]


def _get_lock(theargs, command):
    """Create lock file to prevent two runners writing the same output

       This uses ``PIDLockFile`` to create a pid lock file in the
       output directory named ta3nrunner.<command>.lockpid
       If pid exists it is assumed the lock is held otherwise lock
       is broken and recreated

       :param theargs: return value from argparse, theargs.out must be
                       set to the output directory
       :param command: subcommand being run
       :return: ``PIDLockFile`` upon success
       :raises: LockException: If there was a problem locking
       :raises: Exception: If valid pid lock file already exists
       """
    if not os.path.isdir(theargs.out):
        os.makedirs(theargs.out)
    mylockfile = os.path.join(theargs.out, "ta3nrunner." +
                              command + ".lockpid")
    logger.debug("Looking for lock file: " + mylockfile)
    lock = PIDLockFile(mylockfile, timeout=10)

    if lock.i_am_locking():
        logger.debug("My process id" + str(lock.read_pid()) +
                     " had the lock so I am breaking")
        lock.break_lock()
        lock.acquire(timeout=10)
        return lock

    if lock.is_locked():
        logger.debug("Lock file exists checking pid")
        if psutil.pid_exists(lock.read_pid()):
            raise Exception("ta3nrunner with pid " +
                            str(lock.read_pid()) +
                            " is running")

    lock.break_lock()
    logger.info("Acquiring lock")
    lock.acquire(timeout=10)
    return lock


def get_task_for_command(theargs):
    """Creates the task run by theargs.command

       :raises: ValueError if the command is unknown
    """
    if theargs.command == GEN_DATA:
        return GenDataTask(theargs.out, theargs)
    if theargs.command == TRAIN:
        return TrainTask(theargs.out, theargs)
    if theargs.command == EVAL:
        return EvaluationTask(theargs.out, theargs)
    if theargs.command == GRID:
        return GridSearchTask(theargs.out, theargs)
    if theargs.command == DUMP_FEATURES:
        return DumpFeaturesTask(theargs.out, theargs)
    raise ValueError('Invalid command ' + str(theargs.command))


def run_command(theargs):
    """Runs the task for theargs.command under a pid lock

       A task whose stage directory is already complete is skipped
       with exit code 0.  For eval the report is also printed to
       standard out as JSON.

       :return: exit code of the task
    """
    lock = _get_lock(theargs, theargs.command)
    try:
        task = get_task_for_command(theargs)
        task.run()
        if task.get_status() == Ta3nTask.COMPLETE_STATUS and \
                theargs.command == EVAL and task.get_report() is not None:
            sys.stdout.write(json.dumps(task.get_report().to_dict(),
                                        sort_keys=True, indent=2) + '\n')
        if task.get_error() is not None:
            sys.stderr.write(task.get_dir_name() + ' failed: ' +
                             task.get_error() + '\n')
        return task.get_exit_code()
    finally:
        logger.debug('Releasing lock')
        lock.release()


def _add_common_arguments(parser):
    parser.add_argument('--out', default='.',
                        help='Output directory under which stage '
                             'directories are created (default .)')
    parser.add_argument('--seed', type=int,
                        help='Seed for data generation, initialization '
                             'and sampling')
    parser.add_argument('--log', dest='loglevel', choices=['DEBUG',
                        'INFO', DEFAULT_LOG_LEVEL, 'ERROR', 'CRITICAL'],
                        help="Set the logging level (default " +
                             DEFAULT_LOG_LEVEL + ")",
                        default=DEFAULT_LOG_LEVEL)


def _add_data_arguments(parser):
    parser.add_argument('--data',
                        help='Directory holding <domain>_<split>' +
                             util.FEATURE_SUFFIX + ' files (default '
                             '<out>/stage.1.' + GenDataTask.TASK_NAME + ')')


def _add_train_arguments(parser):
    parser.add_argument('--config',
                        help='Training configuration file, see '
                             'description above')
    parser.add_argument('--variant', choices=VARIANTS,
                        help='Temporal module variant')
    parser.add_argument('--attention', choices=ATTENTION_MODES,
                        help='Attention mode')
    parser.add_argument('--lambda-s', dest='lambda_s', type=float,
                        help='Weight of the frame level domain loss')
    parser.add_argument('--lambda-r', dest='lambda_r', type=float,
                        help='Weight of the relation domain loss')
    parser.add_argument('--lambda-t', dest='lambda_t', type=float,
                        help='Weight of the video level domain loss')
    parser.add_argument('--gamma', type=float,
                        help='Weight of the attentive entropy loss')
    parser.add_argument('--epochs', type=int, help='Number of epochs')
    parser.add_argument('--source-batch', dest='source_batch', type=int,
                        help='Labeled videos per mini-batch')
    parser.add_argument('--k-frames', dest='k_frames', type=int,
                        help='Frames sampled per video')
    parser.add_argument('--target-only', dest='supervised_domain',
                        action='store_const', const=TrainConfig.TARGET,
                        help='Supervise on labeled target videos with no '
                             'adaptation, gives the upper reference')
    parser.add_argument('--reference',
                        help='report.json or metrics.jsonl of a source '
                             'only run, used to compute the gain')


def _add_checkpoint_arguments(parser):
    parser.add_argument('--checkpoint',
                        help='Model checkpoint (default '
                             '<out>/stage.2.' + TrainTask.TASK_NAME +
                             '/model.npz)')


def _parse_arguments(desc, args):
    """Parses command line arguments using argparse.
    """
    parsed_arguments = Ta3nParameters()

    help_formatter = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(description=desc,
                                     formatter_class=help_formatter)
    parser.add_argument('--version', action='version',
                        version=('%(prog)s ' + ta3n.__version__))
    subparsers = parser.add_subparsers(dest='command', metavar='command',
                                       help='One of ' + ', '.join(COMMANDS))
    subparsers.required = True

    gen = subparsers.add_parser(GEN_DATA,
                                help='Generate synthetic source and '
                                     'target feature files')
    _add_common_arguments(gen)
    gen.add_argument('--spec',
                     help='Configuration file with a [synthetic] '
                          'section, defaults used for missing options')

    trn = subparsers.add_parser(TRAIN, help='Train a model')
    _add_common_arguments(trn)
    _add_data_arguments(trn)
    _add_train_arguments(trn)

    evl = subparsers.add_parser(EVAL, help='Evaluate a checkpoint on the '
                                           'validation sets')
    _add_common_arguments(evl)
    _add_data_arguments(evl)
    _add_checkpoint_arguments(evl)
    evl.add_argument('--reference',
                     help='report.json or metrics.jsonl of a source '
                          'only run, used to compute the gain')

    grd = subparsers.add_parser(GRID, help='Grid search the loss weights')
    _add_common_arguments(grd)
    _add_data_arguments(grd)
    _add_train_arguments(grd)
    grd.add_argument('--stage', choices=[COARSE, FINE], default=COARSE,
                     help='Grid to sweep (default ' + COARSE + ')')
    grd.add_argument('--joint', action='store_true',
                     help='With --stage ' + FINE + ' sweep all weights '
                          'jointly instead of one at a time')
    grd.add_argument('--jobs', type=int, default=1,
                     help='Candidates trained in parallel (default 1)')

    dmp = subparsers.add_parser(DUMP_FEATURES,
                                help='Write video features and a 2D '
                                     'projection of both validation sets')
    _add_common_arguments(dmp)
    _add_data_arguments(dmp)
    _add_checkpoint_arguments(dmp)

    return parser.parse_args(args, namespace=parsed_arguments)


def main(args):
    """Main entry into ta3nrunner
    :param args: should be set to sys.argv which is a list of arguments
                 starting with script name as the first argument
    """
    desc = """
              Version {version}

              Unsupervised video domain adaptation on per frame features.
              Commands ({commands}) each run one stage of processing.

              Every stage writes into its own directory under --out:

              stage.1.{gendata}         synthetic feature files
              stage.2.{train}           config.ini, metrics.jsonl,
                                        model.npz, report.json
              stage.2.grid.<coarse|fine> scores.csv, scores.xlsx,
                                        best.ini
              stage.3.{evaluation}      report.json
              stage.4.{dumpfeatures}    features.feat, projection.csv,
                                        projection.json

              Progress is marked with token files in the stage
              directory: '{start}' while running, '{complete}' once
              done and '{error}' holding the message on failure.
              A stage that already completed is skipped.  A stage that
              exists in any other state is reported as an error, rerun
              with a new --out.

              The training configuration file (--config) has this
              layout, command line flags override its values:

              [model]
              variant = temrelation
              attention = domain

              [loss]
              lambda_s = 0.75
              lambda_r = 0.5
              lambda_t = 0.75
              gamma = 0.3

              [optimizer]
              lr0 = 0.03

              [run]
              epochs = 30
              source_batch = 32
              k_frames = 5

              Exit codes: 0 success, 1 task failure, 2 unexpected error,
              3 configuration error, 4 data error, 5 numerical abort.

              This program drops a pid lockfile
              (ta3nrunner.<command>.lockpid) in --out to prevent
              duplicate invocation.
              """.format(version=ta3n.__version__,
                         commands=', '.join(COMMANDS),
                         gendata=GenDataTask.TASK_NAME,
                         train=TrainTask.TASK_NAME,
                         evaluation=EvaluationTask.TASK_NAME,
                         dumpfeatures=DumpFeaturesTask.TASK_NAME,
                         start=Ta3nTask.START_FILE,
                         complete=Ta3nTask.COMPLETE_FILE,
                         error=Ta3nTask.ERROR_FILE)

    theargs = _parse_arguments(desc, args[1:])
    theargs.program = args[0]
    theargs.version = ta3n.__version__

    util.setup_logging(theargs)

    try:
        exit_code = run_command(theargs)
        if exit_code != EXIT_OK:
            logger.error('Non zero exit code ' + str(exit_code) +
                         ' from ' + theargs.command)
        return exit_code
    except Exception:
        logger.exception("Error caught exception")
        return EXIT_UNEXPECTED


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main(sys.argv))
