# -*- coding: UTF-8 -*-
"""
This module provides the leak mechanisms of a DW neuron. Each mechanism creates a drift of the domain wall towards the
reset end (x = 0) in the absence of any input current:

- :class:`DipolarField`: a ferromagnet below the track couples a constant field into the track
- :class:`AnisotropyGradient`: a linear magnetocrystalline anisotropy profile K(x) = k0 + slope * x
- :class:`ShapeTaper`: a trapezoidal track, the wall drifts from the wide to the narrow end
- :class:`NoLeak`: pure integrator
"""

import math

from dwmtj_toolbox.exceptions import ConfigException, DomainException
from dwmtj_toolbox.geometries import TrackGeometry


def _parameter(name: str, value: float, allow_zero: bool = False) -> float:
    """
    converts a mechanism parameter to float and checks its sign

    :raises DomainException: if the value is not finite, negative or zero while zero is not allowed
    """
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainException("{} cannot be converted to float ({})".format(name, value))
    if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise DomainException("{} has to be finite and {} 0 (is {})".format(name, ">=" if allow_zero else ">", value))
    return value


class LeakMechanism(object):
    """
    Base class of all leak mechanisms. It should be treated as abstract, no object should be created directly!
    """

    type_name = ""
    """
    name of the mechanism in the experiment configuration
    """

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LeakMechanism):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        params = ", ".join("{}={}".format(key, value) for key, value in sorted(self.to_dict().items())
                           if key != "type")
        return "<{}({})>".format(type(self).__name__, params)

    def velocity(self, geometry: TrackGeometry, x: float) -> float:
        """
        Returns the drift velocity at position x. The position is not checked.

        :param geometry: geometry of the track
        :param x: position along the track in meters
        :return: drift velocity in m/s (always <= 0)
        """
        raise NotImplementedError("velocity() is not implemented in {}".format(type(self).__name__))

    def max_speed(self, geometry: TrackGeometry) -> float:
        """
        Returns the largest drift speed |v| along the track

        :param geometry: geometry of the track
        :return: maximum drift speed in m/s
        """
        return max(abs(self.velocity(geometry, 0.0)), abs(self.velocity(geometry, geometry.length_m)))

    def check_geometry(self, geometry: TrackGeometry) -> None:
        """
        Checks, that the mechanism drifts towards x = 0 on the given track

        :param geometry: geometry of the track
        :return: Nothing
        :raises DomainException: if the mechanism would push the wall towards the fire end
        """
        pass

    def to_dict(self) -> dict:
        """
        Returns the mechanism as a dictionary with the configuration key names

        :return: the mechanism as dictionary
        """
        return {"type": self.type_name}


class DipolarField(LeakMechanism):
    """
    Leaking by the dipolar coupling field of a ferromagnet underneath the track. The field moves the wall with a
    constant speed towards the reset end.

    :param drift_speed_mps: drift speed in m/s (> 0)
    """

    type_name = "dipolar"

    def __init__(self, drift_speed_mps: float) -> None:
        self.__speed = _parameter("drift_speed_mps", drift_speed_mps)

    @property
    def drift_speed_mps(self) -> float:
        """
        drift speed of the wall in m/s
        """
        return self.__speed

    def velocity(self, geometry: TrackGeometry, x: float) -> float:
        return -self.__speed

    def to_dict(self) -> dict:
        return {"type": self.type_name, "drift_speed_mps": self.__speed}


class AnisotropyGradient(LeakMechanism):
    """
    Leaking by a linear anisotropy profile K(x) = k0 + k_slope * x. The wall is pushed towards lower anisotropy with
    the constant velocity -mobility_mk * k_slope.

    :param mobility_mk: wall velocity per anisotropy gradient in (m/s)/(J/m^4)
    :param k0_jm3: anisotropy at the reset end in J/m^3
    :param k_slope_jm4: anisotropy gradient in J/m^4 (>= 0)
    """

    type_name = "anisotropy"

    def __init__(self, mobility_mk: float, k0_jm3: float, k_slope_jm4: float) -> None:
        self.__mobility = _parameter("mobility_mk", mobility_mk)
        k0_jm3 = float(k0_jm3)
        if not math.isfinite(k0_jm3):
            raise DomainException("k0_jm3 has to be finite (is {})".format(k0_jm3))
        self.__k0 = k0_jm3
        self.__slope = _parameter("k_slope_jm4", k_slope_jm4, allow_zero=True)

    @classmethod
    def from_profile(cls, mobility_mk: float, k_start_jm3: float, k_end_jm3: float,
                     length_m: float) -> "AnisotropyGradient":
        """
        Creates the mechanism from the anisotropy values at both track ends, e.g. for a thickness or composition
        graded film.

        :param mobility_mk: wall velocity per anisotropy gradient in (m/s)/(J/m^4)
        :param k_start_jm3: anisotropy at the reset end
        :param k_end_jm3: anisotropy at the fire end, has to be >= k_start_jm3
        :param length_m: track length
        :return: the new mechanism
        :raises DomainException: if the anisotropy decreases towards the fire end
        """
        slope = (float(k_end_jm3) - float(k_start_jm3)) / float(length_m)
        if slope < 0:
            raise DomainException("anisotropy has to increase towards the fire end ({} -> {})".
                                  format(k_start_jm3, k_end_jm3))
        return cls(mobility_mk, k_start_jm3, slope)

    @property
    def mobility_mk(self) -> float:
        """
        wall velocity per anisotropy gradient
        """
        return self.__mobility

    @property
    def k0_jm3(self) -> float:
        """
        anisotropy at the reset end
        """
        return self.__k0

    @property
    def k_slope_jm4(self) -> float:
        """
        anisotropy gradient along the track
        """
        return self.__slope

    def anisotropy_at(self, x: float) -> float:
        """
        Returns the anisotropy K(x) at position x

        :param x: position along the track in meters
        :return: anisotropy in J/m^3
        """
        return self.__k0 + self.__slope * float(x)

    def velocity(self, geometry: TrackGeometry, x: float) -> float:
        return -self.__mobility * self.__slope

    def to_dict(self) -> dict:
        return {"type": self.type_name, "mobility_mk": self.__mobility, "k0_jm3": self.__k0,
                "k_slope_jm4": self.__slope}


class ShapeTaper(LeakMechanism):
    """
    Leaking by a trapezoidal track. The wall energy scales with the track width, so the wall drifts from the wide
    fire end to the narrow reset end with v = -mobility_ms * w'(x) / w(x). A rectangular track gives zero drift.

    :param mobility_ms: shape mobility in m^2/s (> 0)
    """

    type_name = "shape"

    def __init__(self, mobility_ms: float) -> None:
        self.__mobility = _parameter("mobility_ms", mobility_ms)

    @property
    def mobility_ms(self) -> float:
        """
        shape mobility in m^2/s
        """
        return self.__mobility

    def velocity(self, geometry: TrackGeometry, x: float) -> float:
        width = geometry.width_start_m + (geometry.width_end_m - geometry.width_start_m) * x / geometry.length_m
        return -self.__mobility * geometry.width_slope / width

    def check_geometry(self, geometry: TrackGeometry) -> None:
        if geometry.width_start_m > geometry.width_end_m:
            raise DomainException("shape drift needs the narrow end at x = 0 (width_start_m {} > width_end_m {})".
                                  format(geometry.width_start_m, geometry.width_end_m))

    def to_dict(self) -> dict:
        return {"type": self.type_name, "mobility_ms": self.__mobility}


class NoLeak(LeakMechanism):
    """
    No drift at all, the device is a pure integrator
    """

    type_name = "none"

    def velocity(self, geometry: TrackGeometry, x: float) -> float:
        return 0.0


def drift_velocity(leak: LeakMechanism, geometry: TrackGeometry, x: float) -> float:
    """
    Returns the drift velocity of the wall at position x caused by the leak mechanism. The result is always <= 0.

    :param leak: leak mechanism of the device
    :param geometry: geometry of the track
    :param x: position along the track in meters
    :return: drift velocity in m/s
    :raises DomainException: if x is not within [0, L]
    """
    x = geometry.check_position(x)
    return leak.velocity(geometry, x)


def leak_from_dict(values: dict) -> LeakMechanism:
    """
    Creates a leak mechanism from a configuration dictionary. The key "type" selects the mechanism, all other keys
    are passed as parameters.

    :param values: configuration dictionary
    :return: the new leak mechanism
    :raises ConfigException: if the type is unknown
    :raises DomainException: if a parameter is not physical
    """
    leak_type = values.get("type", NoLeak.type_name)
    if leak_type == DipolarField.type_name:
        return DipolarField(values["drift_speed_mps"])
    if leak_type == AnisotropyGradient.type_name:
        return AnisotropyGradient(values["mobility_mk"], values["k0_jm3"], values["k_slope_jm4"])
    if leak_type == ShapeTaper.type_name:
        return ShapeTaper(values["mobility_ms"])
    if leak_type == NoLeak.type_name:
        return NoLeak()
    raise ConfigException("leak.type: unknown leak mechanism '{}'".format(leak_type))
