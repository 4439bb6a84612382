"""
DW-MTJ Toolbox Module

Behavioural simulation of domain-wall magnetic tunnel junction neurons, synapses and CMOS-free multilayer crossbars.
"""

from ._version import __version__
