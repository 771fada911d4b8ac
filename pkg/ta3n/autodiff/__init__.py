# -*- coding: utf-8 -*-

"""Minimal reverse-mode differentiation on numpy arrays"""

from ta3n.autodiff.tape import DifferentiableValue  # noqa: F401
from ta3n.autodiff.tape import Tape  # noqa: F401
from ta3n.autodiff.tape import backward  # noqa: F401
from ta3n.autodiff.tape import parameter  # noqa: F401
from ta3n.autodiff.tape import zero_grad  # noqa: F401
from ta3n.autodiff.functional import GrlConfig  # noqa: F401
from ta3n.autodiff.functional import grl  # noqa: F401
from ta3n.autodiff.functional import entropy  # noqa: F401
from ta3n.autodiff.functional import entropy_from_logits  # noqa: F401
from ta3n.autodiff.functional import cross_entropy  # noqa: F401
from ta3n.autodiff.gradcheck import finite_difference_check  # noqa: F401
