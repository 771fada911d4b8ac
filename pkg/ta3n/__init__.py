# -*- coding: utf-8 -*-

__author__ = 'ta3n developers'
__email__ = 'ta3n-dev@users.noreply.github.com'
__version__ = '0.1.0'
