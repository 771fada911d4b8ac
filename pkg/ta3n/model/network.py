# -*- coding: utf-8 -*-

import logging
from collections import OrderedDict
import numpy as np

from ta3n.autodiff.functional import GrlConfig
from ta3n.autodiff.functional import grl
from ta3n.model.layers import Mlp
from ta3n.model.layers import TANH
from ta3n.model import relation
from ta3n.model import attention


logger = logging.getLogger(__name__)

TEMPOOLING = 'tempooling'
TEMRELATION = 'temrelation'
VARIANTS = [TEMPOOLING, TEMRELATION]

ATTENTION_NONE = 'none'
ATTENTION_GENERAL = 'general'
ATTENTION_DOMAIN = 'domain'
ATTENTION_MODES = [ATTENTION_NONE, ATTENTION_GENERAL, ATTENTION_DOMAIN]

NUM_DOMAINS = 2


class ModelError(Exception):
    """base exception class for all the other exceptions provided by
       the model package.
    """
    pass


class InputShapeError(ModelError):
    """Exception to denote frames do not match the configured K or D
    """
    pass


class ConfigurationError(ModelError):
    """Exception to denote an invalid architecture configuration
    """
    pass


def _to_bool(value):
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ('1', 'true', 'yes', 'on')


class ModelConfig(object):
    """Architecture of a Ta3nModel

    `use_relation_disc` left as None resolves to True for TemRelation
    and False for TemPooling.
    """

    def __init__(self, num_frames=5, input_dim=16, feature_dim=32,
                 num_classes=4, variant=TEMRELATION,
                 attention_mode=ATTENTION_DOMAIN,
                 max_subsets_per_scale=relation.DEFAULT_MAX_SUBSETS_PER_SCALE,
                 subset_seed=0, init_seed=0, use_spatial_disc=True,
                 use_relation_disc=None, use_temporal_disc=True):
        self.num_frames = int(num_frames)
        self.input_dim = int(input_dim)
        self.feature_dim = int(feature_dim)
        self.num_classes = int(num_classes)
        self.variant = str(variant).lower()
        self.attention_mode = str(attention_mode).lower()
        self.max_subsets_per_scale = int(max_subsets_per_scale)
        self.subset_seed = int(subset_seed)
        self.init_seed = int(init_seed)
        self.use_spatial_disc = _to_bool(use_spatial_disc)
        if use_relation_disc is None:
            use_relation_disc = self.variant == TEMRELATION
        self.use_relation_disc = _to_bool(use_relation_disc)
        self.use_temporal_disc = _to_bool(use_temporal_disc)
        self.validate()

    def validate(self):
        """Checks the configuration

        :raises ConfigurationError: describing the first problem found
        """
        if self.variant not in VARIANTS:
            raise ConfigurationError('Unknown variant ' + self.variant +
                                     ' expected one of ' + str(VARIANTS))
        if self.attention_mode not in ATTENTION_MODES:
            raise ConfigurationError('Unknown attention ' +
                                     self.attention_mode + ' expected one '
                                     'of ' + str(ATTENTION_MODES))
        if self.num_frames < 2:
            raise ConfigurationError('Need at least 2 frames, got ' +
                                     str(self.num_frames))
        for name in ('input_dim', 'feature_dim', 'max_subsets_per_scale'):
            if getattr(self, name) < 1:
                raise ConfigurationError(name + ' must be positive')
        if self.num_classes < 2:
            raise ConfigurationError('Need at least 2 classes')
        if self.variant == TEMPOOLING and self.use_relation_disc:
            raise ConfigurationError('Relation discriminators need the ' +
                                     TEMRELATION + ' variant')
        if self.attention_mode == ATTENTION_DOMAIN:
            if self.variant == TEMRELATION and not self.use_relation_disc:
                raise ConfigurationError('Domain attention over relation '
                                         'features needs the relation '
                                         'discriminators')
            if self.variant == TEMPOOLING and not self.use_spatial_disc:
                raise ConfigurationError('Domain attention over frames '
                                         'needs the spatial discriminator')

    def get_scales(self):
        """Relation scales n = 2..K, empty for TemPooling
        """
        if self.variant != TEMRELATION:
            return []
        return list(range(2, self.num_frames + 1))

    def to_dict(self):
        return OrderedDict([
            ('num_frames', self.num_frames),
            ('input_dim', self.input_dim),
            ('feature_dim', self.feature_dim),
            ('num_classes', self.num_classes),
            ('variant', self.variant),
            ('attention_mode', self.attention_mode),
            ('max_subsets_per_scale', self.max_subsets_per_scale),
            ('subset_seed', self.subset_seed),
            ('init_seed', self.init_seed),
            ('use_spatial_disc', self.use_spatial_disc),
            ('use_relation_disc', self.use_relation_disc),
            ('use_temporal_disc', self.use_temporal_disc)])

    @staticmethod
    def from_dict(values):
        return ModelConfig(**values)


class ForwardOutputs(object):
    """Everything one forward pass produces for a batch of B videos

    class_logits: B x C
    spatial_domain_logits: (B*K) x 2 or None
    relation_domain_logits: list over scales of B x 2
    temporal_domain_logits: B x 2 or None
    attention_weights: B x S (S scales, or K frames for TemPooling)
                       or None without attention
    video_feature: B x F
    """

    def __init__(self):
        self.class_logits = None
        self.spatial_domain_logits = None
        self.relation_domain_logits = []
        self.temporal_domain_logits = None
        self.attention_weights = None
        self.video_feature = None
        self.scale_features = None


def spatial_forward(tape, frames, spatial_mlp):
    """Applies G_sf to every frame independently

    :param frames: ... x D DifferentiableValue
    :raises InputShapeError: if D does not match the MLP input
    """
    if frames.shape[-1] != spatial_mlp.get_input_dim():
        raise InputShapeError('Frame dimension ' + str(frames.shape[-1]) +
                              ' does not match spatial module input ' +
                              str(spatial_mlp.get_input_dim()))
    return spatial_mlp.forward(tape, frames)


class Ta3nModel(object):
    """Parameters of the TemPooling / TemRelation / TA2N / TA3N family
    """

    def __init__(self, config, grl_config=None):
        """Constructor

        Parameters are drawn from a generator seeded with
        config.init_seed in a fixed order.
        """
        self._config = config
        if grl_config is None:
            grl_config = GrlConfig(1.0)
        self._grl = grl_config
        rng = np.random.default_rng(config.init_seed)
        dim = config.feature_dim
        hidden = max(1, dim // 2)

        self.spatial = Mlp('spatial', [config.input_dim, dim], rng,
                           final_activation=True)
        self.relation = OrderedDict()
        self.relation_subsets = OrderedDict()
        for n in config.get_scales():
            self.relation[n] = Mlp('relation.' + str(n), [n * dim, dim], rng,
                                   final_activation=True)
            self.relation_subsets[n] = relation.enumerate_subsets(
                config.num_frames, n, config.max_subsets_per_scale,
                config.subset_seed)
        self.classifier = Mlp('classifier', [dim, config.num_classes], rng)

        self.spatial_disc = None
        if config.use_spatial_disc:
            self.spatial_disc = Mlp('spatial_disc', [dim, hidden, NUM_DOMAINS],
                                    rng)
        self.relation_disc = OrderedDict()
        if config.use_relation_disc:
            for n in config.get_scales():
                self.relation_disc[n] = Mlp('relation_disc.' + str(n),
                                            [dim, hidden, NUM_DOMAINS], rng)
        self.temporal_disc = None
        if config.use_temporal_disc:
            self.temporal_disc = Mlp('temporal_disc',
                                     [dim, hidden, NUM_DOMAINS], rng)
        self.general_attention = None
        if config.attention_mode == ATTENTION_GENERAL:
            self.general_attention = Mlp('general_attention',
                                         [dim, hidden, 1], rng,
                                         activation=TANH)

    def get_config(self):
        return self._config

    def get_grl_config(self):
        return self._grl

    def get_modules(self):
        """Gets list of every Mlp in creation order
        """
        modules = [self.spatial]
        modules.extend(self.relation.values())
        modules.append(self.classifier)
        if self.spatial_disc is not None:
            modules.append(self.spatial_disc)
        modules.extend(self.relation_disc.values())
        if self.temporal_disc is not None:
            modules.append(self.temporal_disc)
        if self.general_attention is not None:
            modules.append(self.general_attention)
        return modules

    def get_parameters(self):
        params = []
        for module in self.get_modules():
            params.extend(module.get_parameters())
        return params

    def get_named_parameters(self):
        """Gets OrderedDict of module path -> parameter
        """
        return OrderedDict((p.get_name(), p) for p in self.get_parameters())

    def _check_frames(self, frames):
        cfg = self._config
        if frames.ndim != 3 or frames.shape[1] != cfg.num_frames or \
                frames.shape[2] != cfg.input_dim:
            raise InputShapeError('Expected frames of shape B x ' +
                                  str(cfg.num_frames) + ' x ' +
                                  str(cfg.input_dim) + ' got ' +
                                  str(frames.shape))

    def forward(self, tape, frames):
        """Runs the full architecture on a B x K x D array

        :raises InputShapeError: if frames do not match K or D
        :returns: ForwardOutputs
        """
        frames = np.asarray(frames, dtype=np.float64)
        self._check_frames(frames)
        cfg = self._config
        batch = frames.shape[0]
        out = ForwardOutputs()

        spatial = spatial_forward(tape, tape.constant(frames), self.spatial)
        flat = tape.reshape(spatial, (batch * cfg.num_frames,
                                      cfg.feature_dim))
        if self.spatial_disc is not None:
            out.spatial_domain_logits = self.spatial_disc.forward(
                tape, grl(tape, flat, self._grl))

        if cfg.variant == TEMRELATION:
            per_scale = []
            for n, mlp in self.relation.items():
                r = relation.temporal_relation(tape, spatial, n,
                                               self.relation_subsets[n], mlp)
                per_scale.append(r)
                if n in self.relation_disc:
                    out.relation_domain_logits.append(
                        self.relation_disc[n].forward(
                            tape, grl(tape, r, self._grl)))
            stacked = attention.stack_features(tape, per_scale)
            reduce = attention.SUM
        else:
            stacked = spatial
            reduce = attention.MEAN
        out.scale_features = stacked

        if cfg.attention_mode == ATTENTION_DOMAIN:
            out.attention_weights = self._domain_weights(tape, out, batch)
        elif cfg.attention_mode == ATTENTION_GENERAL:
            out.attention_weights = attention.general_attention(
                tape, stacked, self.general_attention)

        if out.attention_weights is None:
            if reduce == attention.MEAN:
                video = relation.temporal_pool(tape, stacked)
            else:
                video = tape.sum_axis(stacked, axis=1)
        else:
            video = attention.attend_and_aggregate(
                tape, stacked, out.attention_weights, reduce=reduce)
        out.video_feature = video

        if self.temporal_disc is not None:
            out.temporal_domain_logits = self.temporal_disc.forward(
                tape, grl(tape, video, self._grl))
        out.class_logits = self.classifier.forward(tape, video)
        return out

    def _domain_weights(self, tape, out, batch):
        """Per-scale (or per-frame) entropy attention, B x S
        """
        cfg = self._config
        if cfg.variant == TEMRELATION:
            columns = []
            for logits in out.relation_domain_logits:
                w = attention.domain_attention_weight(tape, logits)
                columns.append(tape.reshape(w, (batch, 1)))
            return tape.concat(columns, axis=1)
        per_frame = tape.reshape(out.spatial_domain_logits,
                                 (batch, cfg.num_frames, NUM_DOMAINS))
        return attention.domain_attention_weight(tape, per_frame)


def forward(tape, batch, model):
    """Runs `model` on a list of FrameFeatureRecord objects

    Every record must already hold exactly K frames of dimension D.

    :raises InputShapeError: naming the first offending record
    """
    cfg = model.get_config()
    stacked = []
    for record in batch:
        frames = np.asarray(record.get_frames(), dtype=np.float64)
        if frames.shape != (cfg.num_frames, cfg.input_dim):
            raise InputShapeError('Record ' + str(record.get_video_id()) +
                                  ' has frames of shape ' +
                                  str(frames.shape) + ' expected ' +
                                  str((cfg.num_frames, cfg.input_dim)))
        stacked.append(frames)
    if len(stacked) == 0:
        raise InputShapeError('Empty batch')
    return model.forward(tape, np.stack(stacked))
