# -*- coding: UTF-8 -*-
"""
Three-terminal DW-MTJ synapse. A long tunnel barrier covers most of the track, the conductance depends linearly on the
fraction of the barrier lying above the parallel domain. Programming moves the wall with current pulses through the
track.
"""

import math

from typing import Optional

from dwmtj_toolbox.constants import default_barrier_window_fractions, float_precision
from dwmtj_toolbox.exceptions import DomainException, NumericalException
from dwmtj_toolbox.geometries import MaterialParams, MtjStack, TrackGeometry
from dwmtj_toolbox.leak import NoLeak
from dwmtj_toolbox.neurons import dw_velocity


class SynapseDevice(object):
    """
    An analog DW-MTJ synapse

    :param geometry: rectangular track geometry
    :param material: material parameters of the track
    :param barrier: the long MTJ barrier, default covers 5 % to 95 % of the track
    :param dw_position_m: current position of the domain wall, default is the barrier start
    :raises DomainException: if the track is tapered, the barrier does not fit or the position is not on the track
    """

    def __init__(self, geometry: TrackGeometry = None, material: MaterialParams = None, barrier: MtjStack = None,
                 dw_position_m: Optional[float] = None) -> None:
        geometry = TrackGeometry() if geometry is None else geometry
        material = MaterialParams() if material is None else material
        if barrier is None:
            start, end = default_barrier_window_fractions
            barrier = MtjStack(window_start_m=start * geometry.length_m, window_end_m=end * geometry.length_m)

        if not geometry.is_rectangular():
            raise DomainException("synapse track has to be rectangular ({})".format(geometry))
        barrier.check_fits(geometry)

        self.__geometry = geometry
        self.__material = material
        self.__barrier = barrier
        self.__leak = NoLeak()
        self.dw_position_m = barrier.window_start_m if dw_position_m is None else dw_position_m

    def __repr__(self) -> str:
        return "<SynapseDevice(geometry={}, material={}, barrier={}, dw_position_m={})>". \
            format(repr(self.__geometry), repr(self.__material), repr(self.__barrier), self.__position)

    def __str__(self) -> str:
        return "synapse at {} m: {} S".format(self.__position, synapse_conductance(self))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SynapseDevice):
            return NotImplemented
        return self.__position == other.dw_position_m and self.__geometry == other.geometry and \
            self.__material == other.material and self.__barrier == other.barrier

    @property
    def geometry(self) -> TrackGeometry:
        """
        geometry of the synapse track
        """
        return self.__geometry

    @property
    def material(self) -> MaterialParams:
        """
        material parameters of the synapse track
        """
        return self.__material

    @property
    def barrier(self) -> MtjStack:
        """
        the long tunnel barrier of the synapse
        """
        return self.__barrier

    @property
    def leak(self) -> NoLeak:
        """
        synapses do not leak
        """
        return self.__leak

    @property
    def dw_position_m(self) -> float:
        """
        position of the domain wall

        :raises DomainException: if the position is not on the track
        """
        return self.__position

    @dw_position_m.setter
    def dw_position_m(self, value: float) -> None:
        """
        see getter
        """
        self.__position = self.__geometry.check_position(value)

    def with_position(self, dw_position_m: float) -> "SynapseDevice":
        """
        Returns a copy of this synapse with the wall at another position

        :param dw_position_m: the new position
        :return: the new synapse
        """
        return SynapseDevice(self.__geometry, self.__material, self.__barrier, dw_position_m)

    def to_dict(self) -> dict:
        """
        Returns the synapse template as dictionary (without the wall position)
        """
        return {"geometry": self.__geometry.to_dict(), "material": self.__material.to_dict(),
                "barrier": self.__barrier.to_dict()}


class ProgrammingPulse(object):
    """
    A rectangular programming current pulse. The sign of the applied pulse is chosen by :func:`program_synapse`, only
    the magnitude of the amplitude is used.

    :param amplitude_A: pulse amplitude, has to be != 0
    :param width_s: pulse width, has to be > 0
    :raises DomainException: if amplitude is 0 or width <= 0
    """

    def __init__(self, amplitude_A: float, width_s: float) -> None:
        amplitude_A = float(amplitude_A)
        width_s = float(width_s)
        if amplitude_A == 0 or not math.isfinite(amplitude_A):
            raise DomainException("pulse amplitude has to be finite and != 0 (is {})".format(amplitude_A))
        if not (math.isfinite(width_s) and width_s > 0):
            raise DomainException("pulse width has to be > 0 (is {})".format(width_s))
        self.amplitude_A = amplitude_A
        self.width_s = width_s

    def __repr__(self) -> str:
        return "<ProgrammingPulse(amplitude_A={}, width_s={})>".format(self.amplitude_A, self.width_s)

    def displacement(self, synapse: SynapseDevice) -> float:
        """
        Returns the wall displacement of one pulse on the given synapse

        :param synapse: the programmed synapse
        :return: displacement in meters (> 0)
        """
        return abs(dw_velocity(synapse, abs(self.amplitude_A), synapse.dw_position_m)) * self.width_s


class ProgrammingResult(object):
    """
    Result of :func:`program_synapse`

    :param pulse_count: number of applied pulses
    :param synapse: the programmed synapse
    :param target_conductance_S: requested conductance
    """

    def __init__(self, pulse_count: int, synapse: SynapseDevice, target_conductance_S: float) -> None:
        self.pulse_count = pulse_count
        self.synapse = synapse
        self.target_conductance_S = target_conductance_S

    def __repr__(self) -> str:
        return "<ProgrammingResult(pulse_count={}, conductance_S={}, target_conductance_S={})>". \
            format(self.pulse_count, self.conductance_S, self.target_conductance_S)

    @property
    def conductance_S(self) -> float:
        """
        conductance of the synapse after programming
        """
        return synapse_conductance(self.synapse)


def synapse_conductance(synapse: SynapseDevice) -> float:
    """
    Returns the conductance of the synapse. Parallel and antiparallel parts of the barrier conduct in parallel:
    G = g_AP + (g_P - g_AP) * clamp((x - a) / (b - a), 0, 1)

    :param synapse: the synapse
    :return: conductance in siemens, always within [g_AP, g_P]
    """
    barrier = synapse.barrier
    a = barrier.window_start_m
    b = barrier.window_end_m
    fraction = min(max((synapse.dw_position_m - a) / (b - a), 0.0), 1.0)
    return barrier.g_antiparallel_S + (barrier.g_parallel_S - barrier.g_antiparallel_S) * fraction


def position_for_conductance(synapse: SynapseDevice, target_conductance_S: float) -> float:
    """
    Inverts the conductance law inside the barrier window

    :param synapse: the synapse
    :param target_conductance_S: requested conductance
    :return: wall position in meters within [a, b]
    :raises DomainException: if the target is outside of [g_AP, g_P]
    """
    barrier = synapse.barrier
    g_ap = barrier.g_antiparallel_S
    g_p = barrier.g_parallel_S
    target = float(target_conductance_S)
    tolerance = (g_p - g_ap) * float_precision
    if not (g_ap - tolerance <= target <= g_p + tolerance):
        raise DomainException("target conductance {} S is outside of [{}, {}]".format(target, g_ap, g_p))
    fraction = min(max((target - g_ap) / (g_p - g_ap), 0.0), 1.0)
    return barrier.window_start_m + fraction * (barrier.window_end_m - barrier.window_start_m)


def program_synapse(synapse: SynapseDevice, target_conductance_S: float, pulse: ProgrammingPulse,
                    max_pulses: int = 1000000) -> ProgrammingResult:
    """
    Programs the synapse open-loop with identical current pulses. Pulses are applied towards the target position until
    the remaining distance is smaller than one pulse displacement. Targets at g_AP or g_P push the wall to or past the
    corresponding barrier edge. The given synapse is not changed.

    :param synapse: synapse to program
    :param target_conductance_S: requested conductance within [g_AP, g_P]
    :param pulse: the programming pulse
    :param max_pulses: upper limit of the applied pulses
    :return: pulse count and the programmed synapse
    :raises DomainException: if the target is outside of [g_AP, g_P]
    :raises NumericalException: if more than max_pulses pulses would be needed
    """
    target_x = position_for_conductance(synapse, target_conductance_S)
    barrier = synapse.barrier
    length = synapse.geometry.length_m
    step = pulse.displacement(synapse)
    tolerance = length * float_precision
    x = synapse.dw_position_m

    if target_x <= barrier.window_start_m or target_x >= barrier.window_end_m:
        # closed form, accumulated steps stop one pulse early on rounding
        if target_x <= barrier.window_start_m:
            distance = x - barrier.window_start_m
        else:
            distance = barrier.window_end_m - x
        count = max(math.ceil(distance / step - float_precision), 0) if distance > tolerance else 0
        if count > max_pulses:
            raise NumericalException("synapse programming did not converge within {} pulses".format(max_pulses))
        x = x + count * step if target_x > x else x - count * step
        x = min(max(x, 0.0), length)
        return ProgrammingResult(count, synapse.with_position(x), float(target_conductance_S))

    count = 0
    while abs(x - target_x) >= step:
        if count >= max_pulses:
            raise NumericalException("synapse programming did not converge within {} pulses".format(max_pulses))
        x = x + step if target_x > x else x - step
        x = min(max(x, 0.0), length)
        count += 1

    return ProgrammingResult(count, synapse.with_position(x), float(target_conductance_S))
