# -*- coding: UTF-8 -*-
"""
Mapping of real valued weight matrices onto synapse conductances. Signed weights are realised by differential synapse
pairs, both halves share the offset g_AP, so the differential readout is proportional to W^T V.
"""

import math
import numpy as np

from typing import Optional, Tuple

from dwmtj_toolbox.crossbar import CrossbarLayer, DifferentialLayer
from dwmtj_toolbox.exceptions import DomainException
from dwmtj_toolbox.synapses import ProgrammingPulse, SynapseDevice, position_for_conductance, program_synapse


class WeightMapping(object):
    """
    Linear weight to conductance mapping G = g_floor + scale * w

    :param scale_S_per_unit: siemens per weight unit (> 0)
    :param g_floor_S: conductance of a zero weight (g_AP)
    :raises DomainException: if the scale is not > 0
    """

    def __init__(self, scale_S_per_unit: float, g_floor_S: float) -> None:
        scale_S_per_unit = float(scale_S_per_unit)
        if not (math.isfinite(scale_S_per_unit) and scale_S_per_unit > 0):
            raise DomainException("scale has to be > 0 (is {})".format(scale_S_per_unit))
        self.scale_S_per_unit = scale_S_per_unit
        self.g_floor_S = float(g_floor_S)

    def __repr__(self) -> str:
        return "<WeightMapping(scale_S_per_unit={}, g_floor_S={})>".format(self.scale_S_per_unit, self.g_floor_S)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightMapping):
            return NotImplemented
        return (self.scale_S_per_unit, self.g_floor_S) == (other.scale_S_per_unit, other.g_floor_S)


def _weight_matrix(weights) -> np.ndarray:
    """
    converts weights into a finite 2D float matrix

    :raises DomainException: if the matrix is not 2D or contains non-finite values
    """
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 2 or weights.size == 0:
        raise DomainException("weights have to be a non-empty 2D matrix (shape {})".format(weights.shape))
    if not np.all(np.isfinite(weights)):
        raise DomainException("weights contain non-finite values")
    return weights


def map_weights(weights, g_antiparallel_S: float, g_parallel_S: float) \
        -> Tuple[np.ndarray, np.ndarray, WeightMapping]:
    """
    Maps a weight matrix onto a differential conductance pair with s = (g_P - g_AP) / max|W|:
    G_plus = g_AP + s * max(W, 0), G_minus = g_AP + s * max(-W, 0). A zero matrix gives s = g_P - g_AP.

    :param weights: N x M weight matrix
    :param g_antiparallel_S: lowest device conductance
    :param g_parallel_S: highest device conductance
    :return: G_plus, G_minus and the mapping
    :raises DomainException: if the weights are not finite or the conductance range is empty
    """
    weights = _weight_matrix(weights)
    if not 0 < g_antiparallel_S < g_parallel_S:
        raise DomainException("conductance range [{}, {}] is not valid".format(g_antiparallel_S, g_parallel_S))
    span = g_parallel_S - g_antiparallel_S
    largest = float(np.max(np.abs(weights)))
    scale = span / largest if largest > 0 else span

    plus = np.minimum(g_antiparallel_S + scale * np.maximum(weights, 0.0), g_parallel_S)
    minus = np.minimum(g_antiparallel_S + scale * np.maximum(-weights, 0.0), g_parallel_S)
    return plus, minus, WeightMapping(scale, g_antiparallel_S)


def decode_weights(g_plus, g_minus, mapping: WeightMapping) -> np.ndarray:
    """
    Returns the weights W' = (G_plus - G_minus) / s

    :param g_plus: conductances of the positive half
    :param g_minus: conductances of the negative half
    :param mapping: the used mapping
    :return: decoded weight matrix
    """
    return (np.asarray(g_plus, dtype=float) - np.asarray(g_minus, dtype=float)) / mapping.scale_S_per_unit


def quantize_position(x: float, n_levels: int, window_start_m: float, window_end_m: float) -> float:
    """
    Returns the nearest of n_levels equally spaced positions within [a, b], ties round towards b. Positions outside
    the window snap to the nearest edge.

    :param x: wall position
    :param n_levels: number of levels (>= 2)
    :param window_start_m: window start a
    :param window_end_m: window end b
    :return: quantised position
    :raises DomainException: if n_levels < 2 or the window is empty
    """
    if int(n_levels) != n_levels or n_levels < 2:
        raise DomainException("n_levels has to be an integer >= 2 (is {})".format(n_levels))
    if not window_end_m > window_start_m:
        raise DomainException("window [{}, {}] is empty".format(window_start_m, window_end_m))
    n_levels = int(n_levels)
    step = (window_end_m - window_start_m) / (n_levels - 1)
    level = int(math.floor((float(x) - window_start_m) / step + 0.5))
    level = min(max(level, 0), n_levels - 1)
    if level == n_levels - 1:
        return float(window_end_m)
    return window_start_m + level * step


def quantize_conductances(conductances, n_levels: int, g_antiparallel_S: float, g_parallel_S: float) -> np.ndarray:
    """
    Quantises every element of a conductance matrix onto n_levels equally spaced levels in [g_AP, g_P]

    :param conductances: conductance matrix
    :param n_levels: number of levels (>= 2)
    :param g_antiparallel_S: lowest level
    :param g_parallel_S: highest level
    :return: quantised matrix
    """
    conductances = np.asarray(conductances, dtype=float)
    result = np.empty_like(conductances)
    for index, value in np.ndenumerate(conductances):
        result[index] = quantize_position(value, n_levels, g_antiparallel_S, g_parallel_S)
    return result


def _crossbar(conductances: np.ndarray, template: SynapseDevice, wire_resistance: float,
              pulse: Optional[ProgrammingPulse]) -> CrossbarLayer:
    """
    places the synapses for a conductance matrix, either directly or by open-loop programming from the barrier start
    """
    start = template.with_position(template.barrier.window_start_m)
    rows = list()
    for row in conductances:
        synapses = list()
        for value in row:
            if pulse is None:
                synapses.append(template.with_position(position_for_conductance(template, value)))
            else:
                synapses.append(program_synapse(start, value, pulse).synapse)
        rows.append(synapses)
    return CrossbarLayer(rows, wire_resistance)


def build_differential_layer(weights, template: SynapseDevice, wire_resistance_per_segment_ohm: float = 0.0,
                             quantize_levels: Optional[int] = None,
                             program_pulse: Optional[ProgrammingPulse] = None) \
        -> Tuple[DifferentialLayer, WeightMapping]:
    """
    Maps a weight matrix onto a differential crossbar

    :param weights: N x M weight matrix
    :param template: synapse providing geometry, material and barrier of all devices
    :param wire_resistance_per_segment_ohm: wire resistance of both halves
    :param quantize_levels: optional number of programmable conductance levels
    :param program_pulse: if given, every synapse is programmed open-loop with this pulse
    :return: the layer and the used mapping
    """
    barrier = template.barrier
    plus, minus, mapping = map_weights(weights, barrier.g_antiparallel_S, barrier.g_parallel_S)
    if quantize_levels is not None:
        plus = quantize_conductances(plus, quantize_levels, barrier.g_antiparallel_S, barrier.g_parallel_S)
        minus = quantize_conductances(minus, quantize_levels, barrier.g_antiparallel_S, barrier.g_parallel_S)
    layer = DifferentialLayer(_crossbar(plus, template, wire_resistance_per_segment_ohm, program_pulse),
                              _crossbar(minus, template, wire_resistance_per_segment_ohm, program_pulse))
    return layer, mapping


def build_positive_layer(weights, template: SynapseDevice, wire_resistance_per_segment_ohm: float = 0.0,
                         quantize_levels: Optional[int] = None) -> Tuple[CrossbarLayer, WeightMapping]:
    """
    Maps a non-negative weight matrix onto a single crossbar, G = g_AP + s * W

    :param weights: N x M non-negative weight matrix
    :param template: synapse providing geometry, material and barrier of all devices
    :param wire_resistance_per_segment_ohm: wire resistance
    :param quantize_levels: optional number of programmable conductance levels
    :return: the layer and the used mapping
    :raises DomainException: if a weight is negative
    """
    weights = _weight_matrix(weights)
    if np.any(weights < 0):
        raise DomainException("negative weights need a differential layer")
    barrier = template.barrier
    plus, _, mapping = map_weights(weights, barrier.g_antiparallel_S, barrier.g_parallel_S)
    if quantize_levels is not None:
        plus = quantize_conductances(plus, quantize_levels, barrier.g_antiparallel_S, barrier.g_parallel_S)
    return _crossbar(plus, template, wire_resistance_per_segment_ohm, None), mapping
