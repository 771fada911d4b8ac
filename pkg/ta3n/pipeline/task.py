# -*- coding: utf-8 -*-

import os
import time
import logging

import ta3n
from ta3n.train.config import ConfigError
from ta3n.train.config import TrainConfig
from ta3n.train.trainer import NumericalAbortError
from ta3n.data.record import DataError
from ta3n.model.network import ModelError
from ta3n.model.network import InputShapeError
from ta3n.model.checkpoint import CheckpointError
from ta3n.evaluation.metrics import EvaluationError


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TASK_FAILED = 1
EXIT_UNEXPECTED = 2
EXIT_CONFIG_ERROR = 3
EXIT_DATA_ERROR = 4
EXIT_NUMERICAL_ABORT = 5

OVERRIDE_OPTIONS = ['variant', 'attention', 'lambda_s', 'lambda_r',
                    'lambda_t', 'gamma', 'epochs', 'k_frames', 'seed',
                    'source_batch', 'supervised_domain']


class Ta3nParameters(object):
    """Holds parameters common to Tasks

    """
    pass


class TaskException(Exception):
    """base exception class for all the other exceptions provided by
       this module.
    """
    pass


class UnsetPathError(TaskException):
    """Exception to denote path is unset
    """
    pass


class UnsetNameError(TaskException):
    """Exception to denote name is unset
    """
    pass


class UnsetStageError(TaskException):
    """Exception to denote stage is unset
    """
    pass


def exit_code_for(exception):
    """Maps an exception raised by a task to the runner exit code
    """
    if isinstance(exception, ConfigError):
        return EXIT_CONFIG_ERROR
    if isinstance(exception, NumericalAbortError):
        return EXIT_NUMERICAL_ABORT
    if isinstance(exception, (DataError, CheckpointError,
                              InputShapeError)):
        return EXIT_DATA_ERROR
    if isinstance(exception, ModelError):
        return EXIT_CONFIG_ERROR
    if isinstance(exception, (EvaluationError, TaskException)):
        return EXIT_TASK_FAILED
    return EXIT_UNEXPECTED


def build_train_config(args):
    """TrainConfig from args.config, then any override set on `args`

    :raises ConfigError: on a missing or invalid configuration
    """
    configfile = getattr(args, 'config', None)
    config = TrainConfig(configfile)
    for option in OVERRIDE_OPTIONS:
        value = getattr(args, option, None)
        if value is not None:
            logger.debug('Override ' + option + ' = ' + str(value))
            config.set_option(option, value)
    if getattr(args, 'supervised_domain', None) == TrainConfig.TARGET:
        logger.info('Target supervision, adaptation weights set to 0')
        for option in ('lambda_s', 'lambda_r', 'lambda_t', 'gamma'):
            config.set_option(option, 0.0)
    config.validate()
    return config


class Ta3nTask(object):
    """One pipeline stage with a directory and token file lifecycle

    The stage directory is stage.<stage>.<name> under the output path.
    A `start` token holding the package version is written when work
    begins, then either `complete` or `error` (holding the message)
    when it ends.  Subclasses set name and stage and implement
    _run_work().
    """

    STAGE_DIRNAME_PREFIX = "stage"

    START_FILE = "start"
    ERROR_FILE = "error"
    COMPLETE_FILE = "complete"

    START_STATUS = "start"
    COMPLETE_STATUS = "complete"
    UNKNOWN_STATUS = "unknown"
    NOTFOUND_STATUS = "notfound"
    ERROR_STATUS = "error"

    def __init__(self, path, args):
        self._path = path
        self._args = args
        self._name = None
        self._stage = None
        self._status = Ta3nTask.UNKNOWN_STATUS
        self._error = None
        self._exit_code = EXIT_OK
        self._can_run = None
        self._start_time = None

    def get_args(self):
        return self._args

    def get_path(self):
        return self._path

    def get_name(self):
        return self._name

    def set_name(self, name):
        self._name = name

    def get_stage(self):
        return self._stage

    def set_stage(self, stage):
        self._stage = stage

    def get_status(self):
        return self._status

    def set_status(self, status):
        self._status = status

    def get_error(self):
        return self._error

    def set_error(self, error, exit_code=EXIT_TASK_FAILED):
        """Sets error message and the exit code it maps to,
           None clears both
        """
        self._error = error
        if error is None:
            self._exit_code = EXIT_OK
        else:
            self._exit_code = exit_code

    def get_exit_code(self):
        return self._exit_code

    def get_dir_name(self):
        """Gets stage.<stage>.<name>

           :raises UnsetStageError: if stage was never set
           :raises UnsetNameError: if name was never set
        """
        if self._stage is None:
            raise UnsetStageError('Stage must be set')
        if self._name is None:
            raise UnsetNameError('Name must be set')
        return '.'.join([Ta3nTask.STAGE_DIRNAME_PREFIX, str(self._stage),
                         self._name])

    def get_dir(self):
        """Gets stage directory under the output path

           :raises UnsetPathError: if path is None
        """
        if self._path is None:
            raise UnsetPathError('Path must be set')
        return os.path.join(self._path, self.get_dir_name())

    def get_file(self, file_name):
        return os.path.join(self.get_dir(), file_name)

    def update_status_from_filesystem(self):
        """Sets status from the tokens present in the stage directory

           complete wins over error which wins over start.  A missing
           directory is NOTFOUND_STATUS and a directory without tokens
           is UNKNOWN_STATUS.

           :returns: the new status
        """
        the_dir = self.get_dir()
        status = Ta3nTask.UNKNOWN_STATUS
        if not os.path.isdir(the_dir):
            status = Ta3nTask.NOTFOUND_STATUS
        else:
            for token, token_status in (
                    (Ta3nTask.COMPLETE_FILE, Ta3nTask.COMPLETE_STATUS),
                    (Ta3nTask.ERROR_FILE, Ta3nTask.ERROR_STATUS),
                    (Ta3nTask.START_FILE, Ta3nTask.START_STATUS)):
                if os.path.isfile(os.path.join(the_dir, token)):
                    status = token_status
                    break
        self.set_status(status)
        logger.debug(self.get_dir_name() + ' status is ' + status)
        return status

    def create_dir(self):
        """Creates the stage directory, and the output path if needed

           :raises OSError: if the stage directory already exists
           :returns: path of the stage directory
        """
        the_dir = self.get_dir()
        logger.debug('Creating directory: ' + the_dir)
        if not os.path.isdir(self._path):
            os.makedirs(self._path)
        os.mkdir(the_dir)
        return the_dir

    def can_run(self):
        """True only when the stage directory does not exist yet

           An already complete stage is skipped without error.  Any
           other existing stage directory sets get_error().
        """
        self._can_run = False
        self.set_error(None)
        status = self.update_status_from_filesystem()
        if status == Ta3nTask.COMPLETE_STATUS:
            logger.info(self.get_dir_name() + ' already complete, skipping')
            return False
        if status != Ta3nTask.NOTFOUND_STATUS:
            logger.warning(self.get_dir_name() + ' was attempted before')
            self.set_error(self.get_dir_name() + ' already exists and ' +
                           'status is ' + status)
            return False
        self._can_run = True
        return True

    def start(self):
        """Creates the stage directory and writes the start token

           On failure get_error() is set and end() is called.
        """
        self._start_time = time.time()
        logger.info(self.get_dir_name() + ' started')
        self.set_status(Ta3nTask.START_STATUS)
        try:
            self.create_dir()
        except OSError as e:
            self.set_error('Unable to create directory: ' + str(e))
            self.end()
            return
        self._write_token(Ta3nTask.START_FILE, ta3n.__version__)

    def end(self):
        """Writes the error token when get_error() is set, otherwise
           the complete token
        """
        elapsed = -1.0
        if self._start_time is not None:
            elapsed = time.time() - self._start_time

        if self.get_error() is not None:
            logger.error(self.get_dir_name() + ' failed after ' +
                         '%.1f' % elapsed + ' seconds: ' + self.get_error())
            self.set_status(Ta3nTask.ERROR_STATUS)
            if os.path.isdir(self.get_dir()):
                try:
                    self._write_token(Ta3nTask.ERROR_FILE,
                                      self.get_error() + '\n', mode='a')
                except (IOError, OSError):
                    logger.exception('Unable to write error token')
            return

        logger.info(self.get_dir_name() + ' finished in ' +
                    '%.1f' % elapsed + ' seconds')
        self.set_status(Ta3nTask.COMPLETE_STATUS)
        self._write_token(Ta3nTask.COMPLETE_FILE, '')

    def run(self):
        """Runs the stage when can_run() allows it

           Exceptions from _run_work() never escape, they set
           get_error() and get_exit_code() through exit_code_for().
        """
        if self._can_run is None:
            self.can_run()
        if self._can_run is False:
            if self.get_error() is not None:
                self.end()
            return

        self.start()
        if self.get_error() is not None:
            self._can_run = False
            return

        try:
            self._run_work()
        except Exception as e:
            code = exit_code_for(e)
            if code == EXIT_UNEXPECTED:
                logger.exception('Caught unexpected exception')
            self.set_error(e.__class__.__name__ + ': ' + str(e), code)
        self.end()

    def _run_work(self):
        raise NotImplementedError('Derived classes must implement '
                                  '_run_work()')

    def _write_token(self, token, content, mode='w'):
        with open(self.get_file(token), mode) as f:
            f.write(content)
