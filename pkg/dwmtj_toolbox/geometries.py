# -*- coding: UTF-8 -*-
"""
Module providing the basic physical descriptions of a domain wall (DW) device: the track geometry, the material
parameters and the magnetic tunnel junction (MTJ) stack sitting on top of the track.
"""

import math

from dwmtj_toolbox.constants import default_g_antiparallel_s, default_g_parallel_s, default_length_m, \
    default_mtj_window_fractions, default_stt_mobility, default_thickness_m, default_width_m, float_precision
from dwmtj_toolbox.exceptions import DomainException


def _positive(name: str, value: float) -> float:
    """
    converts value to float and checks, that it is finite and > 0

    :param name: name of the checked value, used in the error message
    :param value: value to check
    :return: the converted value
    :raises DomainException: if the value is not finite or <= 0
    """
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainException("{} cannot be converted to float ({})".format(name, value))
    if not math.isfinite(value) or value <= 0:
        raise DomainException("{} has to be finite and > 0 (is {})".format(name, value))
    return value


class TrackGeometry(object):
    """
    Physical description of a linearly tapered DW track. The reset end is located at x = 0, the fire end at x = L.
    A rectangular track has equal widths at both ends.

    :param length_m: track length L
    :param width_start_m: width at the reset end (x = 0)
    :param width_end_m: width at the fire end (x = L)
    :param thickness_m: ferromagnet film thickness
    :return: Nothing
    :raises DomainException: if one of the values is not finite or <= 0
    """

    def __init__(self, length_m: float = default_length_m, width_start_m: float = default_width_m,
                 width_end_m: float = default_width_m, thickness_m: float = default_thickness_m) -> None:
        """
        Initialise the track geometry
        """
        self.length_m = length_m
        self.width_start_m = width_start_m
        self.width_end_m = width_end_m
        self.thickness_m = thickness_m

    def __repr__(self) -> str:
        return "<TrackGeometry(length_m={}, width_start_m={}, width_end_m={}, thickness_m={})>". \
            format(self.length_m, self.width_start_m, self.width_end_m, self.thickness_m)

    def __str__(self) -> str:
        return "L={} m, w={}..{} m, t={} m".format(self.length_m, self.width_start_m, self.width_end_m,
                                                  self.thickness_m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrackGeometry):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @property
    def length_m(self) -> float:
        """
        The track length L in meters

        :raises DomainException: if value is not finite or <= 0
        """
        return self.__length

    @length_m.setter
    def length_m(self, value: float) -> None:
        """
        see getter
        """
        self.__length = _positive("length_m", value)

    @property
    def width_start_m(self) -> float:
        """
        The track width at the reset end (x = 0)

        :raises DomainException: if value is not finite or <= 0
        """
        return self.__width_start

    @width_start_m.setter
    def width_start_m(self, value: float) -> None:
        """
        see getter
        """
        self.__width_start = _positive("width_start_m", value)

    @property
    def width_end_m(self) -> float:
        """
        The track width at the fire end (x = L)

        :raises DomainException: if value is not finite or <= 0
        """
        return self.__width_end

    @width_end_m.setter
    def width_end_m(self, value: float) -> None:
        """
        see getter
        """
        self.__width_end = _positive("width_end_m", value)

    @property
    def thickness_m(self) -> float:
        """
        The thickness of the ferromagnetic film

        :raises DomainException: if value is not finite or <= 0
        """
        return self.__thickness

    @thickness_m.setter
    def thickness_m(self, value: float) -> None:
        """
        see getter
        """
        self.__thickness = _positive("thickness_m", value)

    @property
    def width_slope(self) -> float:
        """
        The width derivative w' = (w1 - w0) / L (unitless)
        """
        return (self.__width_end - self.__width_start) / self.__length

    def is_rectangular(self) -> bool:
        """
        Returns True, if both track ends have the same width

        :return: True, if both track ends have the same width, else False
        """
        return self.__width_start == self.__width_end

    def check_position(self, x: float) -> float:
        """
        Checks, that x is located on the track and returns it as float

        :param x: position along the track in meters
        :return: the position as float
        :raises DomainException: if x is not within [0, L]
        """
        x = float(x)
        if not (0 <= x <= self.__length):
            # tolerate rounding noise at the track ends
            tolerance = self.__length * float_precision
            if -tolerance <= x < 0:
                return 0.0
            if self.__length < x <= self.__length + tolerance:
                return self.__length
            raise DomainException("position {} m is outside of the track [0, {}]".format(x, self.__length))
        return x

    def to_dict(self) -> dict:
        """
        Returns the geometry as a dictionary with the configuration key names

        :return: the geometry as dictionary
        """
        return {
            "length_m": self.__length,
            "width_start_m": self.__width_start,
            "width_end_m": self.__width_end,
            "thickness_m": self.__thickness
        }


class MaterialParams(object):
    """
    Material parameters of the DW track in the overdamped one dimensional model.

    :param stt_mobility: current driven DW velocity per unit current density in (m/s)/(A/m^2)
    :raises DomainException: if stt_mobility is not finite or <= 0
    """

    def __init__(self, stt_mobility: float = default_stt_mobility) -> None:
        self.stt_mobility = stt_mobility

    def __repr__(self) -> str:
        return "<MaterialParams(stt_mobility={})>".format(self.stt_mobility)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MaterialParams):
            return NotImplemented
        return self.stt_mobility == other.stt_mobility

    @property
    def stt_mobility(self) -> float:
        """
        spin transfer torque mobility of the DW
        """
        return self.__mobility

    @stt_mobility.setter
    def stt_mobility(self, value: float) -> None:
        """
        see getter
        """
        self.__mobility = _positive("stt_mobility", value)

    def to_dict(self) -> dict:
        """
        Returns the material parameters as a dictionary with the configuration key names

        :return: the material parameters as dictionary
        """
        return {"stt_mobility": self.__mobility}


class MtjStack(object):
    """
    A magnetic tunnel junction on top of the DW track. The barrier footprint covers the window [window_start_m,
    window_end_m] along the track. A neuron uses a short footprint for the output MTJ, a synapse uses a long barrier
    for analog resistance states.

    :param g_parallel_S: conductance in the parallel (low resistance) state
    :param g_antiparallel_S: conductance in the antiparallel (high resistance) state
    :param window_start_m: start of the barrier footprint
    :param window_end_m: end of the barrier footprint
    :raises DomainException: if the conductances or the window are not physical
    """

    def __init__(self, g_parallel_S: float = default_g_parallel_s, g_antiparallel_S: float = default_g_antiparallel_s,
                 window_start_m: float = default_mtj_window_fractions[0] * default_length_m,
                 window_end_m: float = default_mtj_window_fractions[1] * default_length_m) -> None:
        g_parallel_S = _positive("g_parallel_S", g_parallel_S)
        g_antiparallel_S = _positive("g_antiparallel_S", g_antiparallel_S)
        if g_antiparallel_S >= g_parallel_S:
            raise DomainException("g_antiparallel_S ({}) has to be smaller than g_parallel_S ({})".
                                  format(g_antiparallel_S, g_parallel_S))
        window_start_m = float(window_start_m)
        window_end_m = float(window_end_m)
        if not (math.isfinite(window_start_m) and math.isfinite(window_end_m)) or \
                not (0 <= window_start_m < window_end_m):
            raise DomainException("MTJ window [{}, {}] is not a valid interval".format(window_start_m, window_end_m))

        self.__g_parallel = g_parallel_S
        self.__g_antiparallel = g_antiparallel_S
        self.__window_start = window_start_m
        self.__window_end = window_end_m

    def __repr__(self) -> str:
        return "<MtjStack(g_parallel_S={}, g_antiparallel_S={}, window_start_m={}, window_end_m={})>". \
            format(self.__g_parallel, self.__g_antiparallel, self.__window_start, self.__window_end)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MtjStack):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @property
    def g_parallel_S(self) -> float:
        """
        conductance in the parallel state
        """
        return self.__g_parallel

    @property
    def g_antiparallel_S(self) -> float:
        """
        conductance in the antiparallel state
        """
        return self.__g_antiparallel

    @property
    def window_start_m(self) -> float:
        """
        start of the tunnel barrier footprint along the track
        """
        return self.__window_start

    @property
    def window_end_m(self) -> float:
        """
        end of the tunnel barrier footprint along the track
        """
        return self.__window_end

    def check_fits(self, geometry: TrackGeometry) -> None:
        """
        Checks, that the barrier footprint lies on the track

        :param geometry: geometry of the underlying track
        :return: Nothing
        :raises DomainException: if the window exceeds the track length
        """
        if self.__window_end > geometry.length_m * (1 + float_precision):
            raise DomainException("MTJ window end ({}) exceeds the track length ({})".
                                  format(self.__window_end, geometry.length_m))

    def to_dict(self) -> dict:
        """
        Returns the MTJ stack as a dictionary with the configuration key names

        :return: the MTJ stack as dictionary
        """
        return {
            "g_parallel_S": self.__g_parallel,
            "g_antiparallel_S": self.__g_antiparallel,
            "window_start_m": self.__window_start,
            "window_end_m": self.__window_end
        }


def track_width(geometry: TrackGeometry, x: float) -> float:
    """
    Returns the track width at position x, linearly interpolated between both track ends:
    w(x) = w0 + (w1 - w0) * x / L

    :param geometry: geometry of the track
    :param x: position along the track in meters
    :return: track width in meters
    :raises DomainException: if x is not within [0, L]
    """
    x = geometry.check_position(x)
    return geometry.width_start_m + (geometry.width_end_m - geometry.width_start_m) * x / geometry.length_m


def current_density(device, input_current: float, x: float) -> float:
    """
    Converts the terminal current into the current density J = I / (w(x) * t) at position x. The sign of J equals the
    sign of I.

    :param device: neuron or synapse device providing a :class:`TrackGeometry` as ``geometry``
    :param input_current: current through the DW track in amperes
    :param x: position along the track in meters
    :return: current density in A/m^2
    :raises DomainException: if x is not within [0, L]
    """
    geometry = device.geometry
    return float(input_current) / (track_width(geometry, x) * geometry.thickness_m)
