# -*- coding: utf-8 -*-

from ta3n.model.network import ModelConfig  # noqa: F401
from ta3n.model.network import Ta3nModel  # noqa: F401
from ta3n.model.network import ForwardOutputs  # noqa: F401
from ta3n.model.network import forward  # noqa: F401
