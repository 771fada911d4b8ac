# -*- coding: utf-8 -*-

from ta3n.data.record import FrameFeatureRecord  # noqa: F401
from ta3n.data.record import DomainDataset  # noqa: F401
from ta3n.data.record import sample_frames  # noqa: F401
from ta3n.data.featurefile import load_feature_file  # noqa: F401
from ta3n.data.featurefile import save_feature_file  # noqa: F401
from ta3n.data.batching import make_batches  # noqa: F401
