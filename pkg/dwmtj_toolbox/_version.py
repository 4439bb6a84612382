# -*- coding: UTF-8 -*-
"""
Version File for dwmtj_toolbox-Module
"""

__version__ = "0.1.0.b1"
