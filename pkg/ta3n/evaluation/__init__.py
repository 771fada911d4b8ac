# -*- coding: utf-8 -*-

from ta3n.evaluation.metrics import MetricsReport  # noqa: F401
from ta3n.evaluation.metrics import accuracy  # noqa: F401
from ta3n.evaluation.metrics import attention_summary  # noqa: F401
from ta3n.evaluation.metrics import domain_loss_metric  # noqa: F401
from ta3n.evaluation.metrics import evaluate  # noqa: F401
from ta3n.evaluation.mmd import mmd  # noqa: F401
from ta3n.evaluation.projection import dump_features  # noqa: F401
from ta3n.evaluation.projection import project_2d  # noqa: F401
