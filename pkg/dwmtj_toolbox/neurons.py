# -*- coding: UTF-8 -*-
"""
This module provides the four-terminal DW-MTJ leaky integrate-and-fire neuron. The DW track (input terminals)
integrates current and leaks by one of the mechanisms of :mod:`dwmtj_toolbox.leak`. An electrically isolated output
MTJ on top of the fire end switches by dipolar coupling, when the wall passes underneath.

The wall moves with the overdamped one dimensional law v = stt_mobility * J(x) + v_drift(x), integrated with fixed
step explicit Euler.
"""

import math

from enum import Enum
from typing import Optional, Tuple

from dwmtj_toolbox.constants import default_fire_fraction, default_hysteresis_m, default_mtj_window_fractions, \
    default_refractory_s, default_supply_voltage_v
from dwmtj_toolbox.exceptions import ConfigException, DomainException
from dwmtj_toolbox.geometries import MaterialParams, MtjStack, TrackGeometry, current_density
from dwmtj_toolbox.leak import LeakMechanism, NoLeak, drift_velocity


class MtjState(Enum):
    """Enum defining the states of the output MTJ"""
    ANTIPARALLEL = 0
    """High resistance state, the wall has not reached the MTJ"""
    PARALLEL = 1
    """Low resistance state, the free layer follows the domain below the MTJ"""


class NeuronDevice(object):
    """
    Parameters of a four-terminal DW-MTJ neuron. Objects of this class are not changed during a simulation, the
    mutable part is stored in :class:`NeuronState`.

    :param geometry: geometry of the DW track
    :param leak: leak mechanism
    :param material: material parameters of the track
    :param output_mtj: the electrically isolated output MTJ
    :param fire_position_m: threshold position x_f, has to be located inside the output MTJ window
    :param reset_position_m: wall position after firing
    :param hysteresis_m: the MTJ switches back to antiparallel below x_f - hysteresis_m
    :param refractory_s: input current is ignored for this time after a fire event
    :param supply_voltage_V: voltage applied across the output MTJ
    :raises DomainException: if the parameters are inconsistent
    """

    def __init__(self, geometry: TrackGeometry = None, leak: LeakMechanism = None, material: MaterialParams = None,
                 output_mtj: MtjStack = None, fire_position_m: float = None, reset_position_m: float = 0.0,
                 hysteresis_m: float = default_hysteresis_m, refractory_s: float = default_refractory_s,
                 supply_voltage_V: float = default_supply_voltage_v) -> None:
        """
        Initialise the neuron. Missing parts are filled with the package defaults.
        """
        geometry = TrackGeometry() if geometry is None else geometry
        leak = NoLeak() if leak is None else leak
        material = MaterialParams() if material is None else material
        if output_mtj is None:
            start, end = default_mtj_window_fractions
            output_mtj = MtjStack(window_start_m=start * geometry.length_m, window_end_m=end * geometry.length_m)
        if fire_position_m is None:
            fire_position_m = default_fire_fraction * geometry.length_m

        if not isinstance(geometry, TrackGeometry):
            raise TypeError("geometry is not of type TrackGeometry ({})".format(type(geometry)))
        if not isinstance(leak, LeakMechanism):
            raise TypeError("leak is not of type LeakMechanism ({})".format(type(leak)))
        if not isinstance(material, MaterialParams):
            raise TypeError("material is not of type MaterialParams ({})".format(type(material)))
        if not isinstance(output_mtj, MtjStack):
            raise TypeError("output_mtj is not of type MtjStack ({})".format(type(output_mtj)))

        fire_position_m = float(fire_position_m)
        reset_position_m = float(reset_position_m)
        hysteresis_m = float(hysteresis_m)
        refractory_s = float(refractory_s)
        supply_voltage_V = float(supply_voltage_V)

        if not (0 <= reset_position_m < fire_position_m <= geometry.length_m):
            raise DomainException("positions have to satisfy 0 <= reset ({}) < fire ({}) <= L ({})".
                                  format(reset_position_m, fire_position_m, geometry.length_m))
        if not (output_mtj.window_start_m <= fire_position_m <= output_mtj.window_end_m):
            raise DomainException("fire position {} is outside of the output MTJ window [{}, {}]".
                                  format(fire_position_m, output_mtj.window_start_m, output_mtj.window_end_m))
        if not math.isfinite(hysteresis_m) or hysteresis_m < 0:
            raise DomainException("hysteresis_m has to be >= 0 (is {})".format(hysteresis_m))
        if not math.isfinite(refractory_s) or refractory_s < 0:
            raise DomainException("refractory_s has to be >= 0 (is {})".format(refractory_s))
        if not math.isfinite(supply_voltage_V):
            raise DomainException("supply_voltage_V has to be finite (is {})".format(supply_voltage_V))
        output_mtj.check_fits(geometry)
        leak.check_geometry(geometry)

        self.__geometry = geometry
        self.__leak = leak
        self.__material = material
        self.__output_mtj = output_mtj
        self.__fire = fire_position_m
        self.__reset = reset_position_m
        self.__hysteresis = hysteresis_m
        self.__refractory = refractory_s
        self.__supply = supply_voltage_V

    def __repr__(self) -> str:
        return "<NeuronDevice(geometry={}, leak={}, material={}, output_mtj={}, fire_position_m={}, " \
               "reset_position_m={}, hysteresis_m={}, refractory_s={}, supply_voltage_V={})>". \
            format(repr(self.__geometry), repr(self.__leak), repr(self.__material), repr(self.__output_mtj),
                   self.__fire, self.__reset, self.__hysteresis, self.__refractory, self.__supply)

    def __str__(self) -> str:
        return "neuron [{}] {} - fire at {} m".format(self.__geometry, self.__leak.type_name, self.__fire)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NeuronDevice):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @property
    def geometry(self) -> TrackGeometry:
        """
        geometry of the DW track
        """
        return self.__geometry

    @property
    def leak(self) -> LeakMechanism:
        """
        leak mechanism of the neuron
        """
        return self.__leak

    @property
    def material(self) -> MaterialParams:
        """
        material parameters of the DW track
        """
        return self.__material

    @property
    def output_mtj(self) -> MtjStack:
        """
        the electrically isolated output MTJ
        """
        return self.__output_mtj

    @property
    def fire_position_m(self) -> float:
        """
        threshold position x_f
        """
        return self.__fire

    @property
    def reset_position_m(self) -> float:
        """
        wall position after firing
        """
        return self.__reset

    @property
    def hysteresis_m(self) -> float:
        """
        switching hysteresis of the output MTJ
        """
        return self.__hysteresis

    @property
    def refractory_s(self) -> float:
        """
        refractory time after a fire event
        """
        return self.__refractory

    @property
    def supply_voltage_V(self) -> float:
        """
        voltage across the output MTJ
        """
        return self.__supply

    def replace(self, **changes) -> "NeuronDevice":
        """
        Returns a copy of the device with the given constructor arguments replaced

        :param changes: constructor arguments to replace
        :return: the new device
        """
        values = {
            "geometry": self.__geometry,
            "leak": self.__leak,
            "material": self.__material,
            "output_mtj": self.__output_mtj,
            "fire_position_m": self.__fire,
            "reset_position_m": self.__reset,
            "hysteresis_m": self.__hysteresis,
            "refractory_s": self.__refractory,
            "supply_voltage_V": self.__supply
        }
        values.update(changes)
        return NeuronDevice(**values)

    def to_dict(self) -> dict:
        """
        Returns the device as a dictionary with the configuration key names

        :return: the device as dictionary
        """
        return {
            "geometry": self.__geometry.to_dict(),
            "leak": self.__leak.to_dict(),
            "material": self.__material.to_dict(),
            "output_mtj": self.__output_mtj.to_dict(),
            "fire_position_m": self.__fire,
            "reset_position_m": self.__reset,
            "hysteresis_m": self.__hysteresis,
            "refractory_s": self.__refractory,
            "supply_voltage_V": self.__supply
        }


class NeuronState(object):
    """
    Mutable state of a neuron during a simulation

    :param dw_position_m: position of the domain wall
    :param mtj_state: state of the output MTJ
    :param refractory_until_s: input current is ignored before this time
    :param last_fire_time_s: time of the last fire event or None
    """

    __slots__ = ("dw_position_m", "mtj_state", "refractory_until_s", "last_fire_time_s")

    def __init__(self, dw_position_m: float, mtj_state: MtjState = MtjState.ANTIPARALLEL,
                 refractory_until_s: float = 0.0, last_fire_time_s: Optional[float] = None) -> None:
        self.dw_position_m = float(dw_position_m)
        self.mtj_state = mtj_state
        self.refractory_until_s = float(refractory_until_s)
        self.last_fire_time_s = last_fire_time_s

    def __repr__(self) -> str:
        return "<NeuronState(dw_position_m={}, mtj_state={}, refractory_until_s={}, last_fire_time_s={})>". \
            format(self.dw_position_m, self.mtj_state.name, self.refractory_until_s, self.last_fire_time_s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NeuronState):
            return NotImplemented
        return (self.dw_position_m, self.mtj_state, self.refractory_until_s, self.last_fire_time_s) == \
               (other.dw_position_m, other.mtj_state, other.refractory_until_s, other.last_fire_time_s)

    def copy(self) -> "NeuronState":
        """
        Returns an independent copy of the state
        """
        return NeuronState(self.dw_position_m, self.mtj_state, self.refractory_until_s, self.last_fire_time_s)


class FireEvent(object):
    """
    A spike of a neuron. Events sort by time, then layer, then neuron index.

    :param time_s: time of the spike
    :param layer: index of the network layer
    :param neuron: index of the neuron inside the layer
    """

    __slots__ = ("time_s", "layer", "neuron")

    def __init__(self, time_s: float, layer: int = 0, neuron: int = 0) -> None:
        self.time_s = float(time_s)
        self.layer = int(layer)
        self.neuron = int(neuron)

    def __repr__(self) -> str:
        return "<FireEvent(time_s={}, layer={}, neuron={})>".format(self.time_s, self.layer, self.neuron)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FireEvent):
            return NotImplemented
        return self.sort_key() == other.sort_key()

    def __lt__(self, other: "FireEvent") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> Tuple[float, int, int]:
        """
        key for time ordering
        """
        return self.time_s, self.layer, self.neuron


def initial_state(device: NeuronDevice, dw_position_m: float = None) -> NeuronState:
    """
    Returns a consistent state with the wall at the given position (default: the reset position)

    :param device: the neuron device
    :param dw_position_m: initial wall position or None
    :return: the new state
    :raises DomainException: if the position is not on the track
    """
    x = device.reset_position_m if dw_position_m is None else device.geometry.check_position(dw_position_m)
    state = NeuronState(x)
    state.mtj_state = MtjState.PARALLEL if x >= device.fire_position_m else MtjState.ANTIPARALLEL
    return state


def dw_velocity(device, input_current: float, x: float) -> float:
    """
    Returns the wall velocity v = stt_mobility * J(x) + v_drift(x). A positive input current moves the wall towards
    the fire end.

    :param device: neuron or synapse device
    :param input_current: current through the DW track in amperes
    :param x: position along the track in meters
    :return: wall velocity in m/s
    :raises DomainException: if x is not within [0, L]
    """
    return device.material.stt_mobility * current_density(device, input_current, x) + \
        drift_velocity(device.leak, device.geometry, x)


def mtj_output_state(state: NeuronState, device: NeuronDevice) -> MtjState:
    """
    Returns the state of the output MTJ for the wall position of state. Parallel at or beyond the fire position,
    antiparallel at or below fire position - hysteresis, inside the hysteresis band the prior state is retained.

    :param state: current neuron state (its mtj_state is the prior state)
    :param device: the neuron device
    :return: the new MTJ state
    """
    x = state.dw_position_m
    if x >= device.fire_position_m:
        return MtjState.PARALLEL
    if x <= device.fire_position_m - device.hysteresis_m:
        return MtjState.ANTIPARALLEL
    return state.mtj_state


def neuron_output_current(state: NeuronState, device: NeuronDevice) -> float:
    """
    Returns the current through the output MTJ, I = V_supply * g(mtj_state). The output does not depend on the input
    terminal current.

    :param state: current neuron state
    :param device: the neuron device
    :return: output current in amperes
    """
    mtj = device.output_mtj
    conductance = mtj.g_parallel_S if state.mtj_state == MtjState.PARALLEL else mtj.g_antiparallel_S
    return device.supply_voltage_V * conductance


def step_neuron(state: NeuronState, device: NeuronDevice, input_current: float, t: float,
                dt: float) -> Tuple[NeuronState, Optional[FireEvent]]:
    """
    Advances the neuron by one explicit Euler step from t to t + dt.

    The input current is ignored while t < refractory_until_s, the leak still applies. The wall position is clamped
    to the track. If the driven wall reaches the fire position, a :class:`FireEvent` is emitted, the wall is reset
    and the refractory window starts. The event time is interpolated linearly inside the step.

    :param state: state at time t (not changed)
    :param device: the neuron device
    :param input_current: current into the DW track in amperes
    :param t: time at the start of the step
    :param dt: time step
    :return: the state at t + dt and the fire event or None
    :raises ConfigException: if dt is not > 0
    """
    if not dt > 0:
        raise ConfigException("dt_s: time step has to be > 0 (is {})".format(dt))

    x = state.dw_position_m
    current = input_current if t >= state.refractory_until_s else 0.0
    velocity = dw_velocity(device, current, x)
    length = device.geometry.length_m
    x_new = min(max(x + velocity * dt, 0.0), length)

    fire = device.fire_position_m
    if velocity > 0 and x_new >= fire:
        fraction = (fire - x) / (x_new - x) if x < fire else 0.0
        fire_time = t + fraction * dt
        # refractory window runs from the interpolated fire time, not from t
        new_state = NeuronState(device.reset_position_m, MtjState.PARALLEL, fire_time + device.refractory_s,
                                fire_time)
        new_state.mtj_state = mtj_output_state(new_state, device)
        return new_state, FireEvent(fire_time)

    new_state = NeuronState(x_new, state.mtj_state, state.refractory_until_s, state.last_fire_time_s)
    new_state.mtj_state = mtj_output_state(new_state, device)
    return new_state, None
