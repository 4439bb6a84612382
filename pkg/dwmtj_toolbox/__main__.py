# -*- coding: UTF-8 -*-
from dwmtj_toolbox.cli import main

main()
