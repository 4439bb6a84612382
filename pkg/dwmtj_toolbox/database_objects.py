# -*- coding: UTF-8 -*-
"""
Summarized import of database objects to ensure correct alembic migration script generation
"""

from dwmtj_toolbox.runs import SimulationRun, SpikeRecord
from dwmtj_toolbox.db_handler import Base
