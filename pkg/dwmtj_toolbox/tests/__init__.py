# -*- coding: UTF-8 -*-
"""
Modules and classes to run unittest on the device, crossbar, network and database modules
"""
