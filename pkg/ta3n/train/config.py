# -*- coding: utf-8 -*-

import os
import logging
from collections import OrderedDict
import configparser

from ta3n.losses import LossWeights
from ta3n.losses import LossError
from ta3n.model.network import ModelConfig
from ta3n.model.network import ModelError
from ta3n.model.network import TEMRELATION
from ta3n.model.network import ATTENTION_DOMAIN
from ta3n.model.relation import DEFAULT_MAX_SUBSETS_PER_SCALE


logger = logging.getLogger(__name__)

TRUE_VALUES = ('1', 'true', 'yes', 'on')
FALSE_VALUES = ('0', 'false', 'no', 'off')


class ConfigError(Exception):
    """Exception to denote a missing, unparseable or invalid
       configuration
    """
    pass


class BaseConfig(object):
    """Base class for ConfigParser objects containing functions
       usable by derived classes
    """
    def __init__(self):
        """Constructor"""
        pass

    def _get_config(self, configfile):
        if not os.path.isfile(configfile):
            logger.warning(configfile + ' is not a file')
            return None

        config = configparser.ConfigParser()
        try:
            config.read(configfile)
        except configparser.Error as e:
            raise ConfigError('Unable to parse ' + configfile + ' : ' +
                              str(e))
        return config

    def _get_value(self, config, section, option):
        """Calls get() on configparser object `config` passed in to
           get value for corresponding option
           :param config: ConfigParser object
           :param section: Section to look for value
           :param option: Keyword value or value left of =
                           (ie foo = X the keyword would be foo)
           :returns: value as string or None if not found
        """
        if section is None:
            logger.error('Section cannot be None')
            return None

        if not config.has_section(section):
            logger.debug(section + ' section not found in configuration')
            return None

        if not config.has_option(section, option):
            logger.debug('In parsing ' + section + ' configuration ' +
                         option + ' not found')
            return None

        return config.get(section, option)

    def _convert(self, section, option, raw, kind):
        """Converts `raw` string to `kind` (int, float, bool or str)

        :raises ConfigError: if conversion fails
        """
        if raw is None:
            return None
        try:
            if kind is bool:
                lowered = raw.strip().lower()
                if lowered in TRUE_VALUES:
                    return True
                if lowered in FALSE_VALUES:
                    return False
                if lowered in ('', 'none', 'auto'):
                    return None
                raise ValueError('not a boolean')
            if kind is str:
                return raw.strip()
            return kind(raw)
        except ValueError:
            raise ConfigError('Unable to convert ' + section + '.' + option +
                              ' : ' + str(raw) + ' to ' + kind.__name__)

    def _write_sections(self, sections, path):
        """Writes OrderedDict of section -> OrderedDict of option -> value
           to `path` in configparser format

        :raises ConfigError: if the file cannot be written
        """
        config = configparser.ConfigParser()
        for section, options in sections.items():
            config.add_section(section)
            for option, value in options.items():
                config.set(section, option, _format_value(value))
        try:
            with open(path, 'w') as f:
                config.write(f)
        except (IOError, OSError) as e:
            raise ConfigError('Unable to write ' + path + ' : ' + str(e))


def _format_value(value):
    if value is None:
        return 'auto'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


class TrainConfig(BaseConfig):
    """Training configuration, read from and written to a file
       in configparser format as seen in this example:

       [model]
       variant = temrelation
       attention = domain
       video_feature_dim = 32
       max_subsets_per_scale = 32
       init_seed = 0
       use_spatial_disc = true
       use_relation_disc = auto
       use_temporal_disc = true

       [loss]
       lambda_s = 0.75
       lambda_r = 0.5
       lambda_t = 0.75
       gamma = 0.3

       [optimizer]
       lr0 = 0.03
       momentum = 0.9
       weight_decay = 0.0001
       alpha = 10.0
       beta = 0.75
       grl_ramp = 10.0

       [run]
       epochs = 30
       source_batch = 32
       k_frames = 5
       seed = 0
       supervised_domain = source
    """
    MODEL = 'model'
    LOSS = 'loss'
    OPTIMIZER = 'optimizer'
    RUN = 'run'

    SCHEMA = OrderedDict([
        (MODEL, OrderedDict([('variant', str),
                             ('attention', str),
                             ('video_feature_dim', int),
                             ('max_subsets_per_scale', int),
                             ('init_seed', int),
                             ('use_spatial_disc', bool),
                             ('use_relation_disc', bool),
                             ('use_temporal_disc', bool)])),
        (LOSS, OrderedDict([('lambda_s', float),
                            ('lambda_r', float),
                            ('lambda_t', float),
                            ('gamma', float)])),
        (OPTIMIZER, OrderedDict([('lr0', float),
                                 ('momentum', float),
                                 ('weight_decay', float),
                                 ('alpha', float),
                                 ('beta', float),
                                 ('grl_ramp', float)])),
        (RUN, OrderedDict([('epochs', int),
                           ('source_batch', int),
                           ('k_frames', int),
                           ('seed', int),
                           ('supervised_domain', str)]))])

    SOURCE = 'source'
    TARGET = 'target'

    def __init__(self, configfile=None):
        """Sets defaults then, if `configfile` is set, reads it

        :raises ConfigError: if `configfile` is missing or invalid
        """
        super(TrainConfig, self).__init__()
        self.variant = TEMRELATION
        self.attention = ATTENTION_DOMAIN
        self.video_feature_dim = 32
        self.max_subsets_per_scale = DEFAULT_MAX_SUBSETS_PER_SCALE
        self.init_seed = None
        self.use_spatial_disc = True
        self.use_relation_disc = None
        self.use_temporal_disc = True

        self.lambda_s = 0.75
        self.lambda_r = 0.5
        self.lambda_t = 0.75
        self.gamma = 0.3

        self.lr0 = 0.03
        self.momentum = 0.9
        self.weight_decay = 1e-4
        self.alpha = 10.0
        self.beta = 0.75
        self.grl_ramp = 10.0

        self.epochs = 30
        self.source_batch = 32
        self.k_frames = 5
        self.seed = 0
        self.supervised_domain = TrainConfig.SOURCE

        if configfile is not None:
            self._parse_config(configfile)
        self.validate()

    def _parse_config(self, configfile):
        config = self._get_config(configfile)
        if config is None:
            raise ConfigError('Config file ' + configfile + ' not found')
        for section in config.sections():
            if section not in TrainConfig.SCHEMA:
                logger.warning('Ignoring unknown section ' + section +
                               ' in ' + configfile)
        for section, options in TrainConfig.SCHEMA.items():
            for option, kind in options.items():
                raw = self._get_value(config, section, option)
                if raw is None:
                    continue
                self.set_option(option,
                                self._convert(section, option, raw, kind))

    def set_option(self, option, value):
        """Sets `option` (a name from any section) to `value`

        :raises ConfigError: if `option` is unknown
        """
        for options in TrainConfig.SCHEMA.values():
            if option in options:
                if isinstance(value, str) and options[option] is str:
                    value = value.strip().lower()
                setattr(self, option, value)
                return
        raise ConfigError('Unknown configuration option ' + str(option))

    def get_option(self, option):
        return getattr(self, option)

    def get_loss_weights(self):
        try:
            return LossWeights(self.lambda_s, self.lambda_r, self.lambda_t,
                               self.gamma)
        except LossError as e:
            raise ConfigError(str(e))

    def get_resolved_init_seed(self):
        if self.init_seed is None:
            return self.seed
        return self.init_seed

    def get_model_config(self, input_dim, num_classes):
        """Builds ModelConfig for data of dimension `input_dim`

        :raises ConfigError: if the architecture is invalid
        """
        try:
            return ModelConfig(num_frames=self.k_frames,
                               input_dim=input_dim,
                               feature_dim=self.video_feature_dim,
                               num_classes=num_classes,
                               variant=self.variant,
                               attention_mode=self.attention,
                               max_subsets_per_scale=self.
                               max_subsets_per_scale,
                               subset_seed=self.seed,
                               init_seed=self.get_resolved_init_seed(),
                               use_spatial_disc=self.use_spatial_disc,
                               use_relation_disc=self.use_relation_disc,
                               use_temporal_disc=self.use_temporal_disc)
        except ModelError as e:
            raise ConfigError(str(e))

    def validate(self):
        """Checks value ranges

        :raises ConfigError: describing the first problem found
        """
        self.get_loss_weights()
        if not self.lr0 > 0:
            raise ConfigError('lr0 must be positive, got ' + str(self.lr0))
        if self.momentum < 0 or self.momentum >= 1:
            raise ConfigError('momentum must be in [0, 1), got ' +
                              str(self.momentum))
        if self.weight_decay < 0:
            raise ConfigError('weight_decay must be nonnegative')
        if self.epochs < 1:
            raise ConfigError('epochs must be at least 1, got ' +
                              str(self.epochs))
        if self.source_batch < 1:
            raise ConfigError('source_batch must be at least 1')
        if self.k_frames < 2:
            raise ConfigError('k_frames must be at least 2')
        if self.supervised_domain not in (TrainConfig.SOURCE,
                                          TrainConfig.TARGET):
            raise ConfigError('supervised_domain must be source or target, '
                              'got ' + str(self.supervised_domain))
        if self.supervised_domain == TrainConfig.TARGET and \
                not self.get_loss_weights().is_source_only():
            raise ConfigError('Training on target labels requires every '
                              'adaptation weight to be 0')
        # architecture checks that do not depend on the data
        self.get_model_config(input_dim=1, num_classes=2)

    def get_sections(self):
        """Gets OrderedDict of section -> OrderedDict of option -> value
        """
        sections = OrderedDict()
        for section, options in TrainConfig.SCHEMA.items():
            sections[section] = OrderedDict(
                (option, getattr(self, option)) for option in options)
        return sections

    def copy(self):
        other = TrainConfig()
        for options in TrainConfig.SCHEMA.values():
            for option in options:
                setattr(other, option, getattr(self, option))
        return other

    def write(self, path):
        """Writes the fully resolved configuration to `path`
        """
        sections = self.get_sections()
        sections[TrainConfig.MODEL]['init_seed'] = \
            self.get_resolved_init_seed()
        self._write_sections(sections, path)
