# -*- coding: UTF-8 -*-
"""
Experiment configuration. Configurations are JSON files, validated against a strict schema: unknown keys are rejected,
documented defaults are filled in and all problems are collected before a single :class:`ConfigException` is raised.
Every error message starts with the dotted key path of the offending value.
"""

import copy
import json
import math
import numpy as np
import os

from typing import Any, Callable, Dict, List, Optional, Tuple

from dwmtj_toolbox import constants as const
from dwmtj_toolbox.csv_io import read_matrix_csv
from dwmtj_toolbox.exceptions import ConfigException, DomainException
from dwmtj_toolbox.geometries import MaterialParams, MtjStack, TrackGeometry
from dwmtj_toolbox.leak import leak_from_dict
from dwmtj_toolbox.mapping import build_differential_layer, build_positive_layer
from dwmtj_toolbox.network import DriveWaveform, InhibitionPolicy, Network, SimulationConfig, dc_encode, \
    inhibition_from_dict, rate_encode, square_encode
from dwmtj_toolbox.neurons import NeuronDevice
from dwmtj_toolbox.synapses import SynapseDevice

_REQUIRED = object()


class _Field(object):
    """
    A single entry of the configuration schema

    :param kind: one of float, int, str, bool, floats, matrix, object, objects, variant
    :param default: default value, None for optional values without default, _REQUIRED for mandatory values
    :param check: optional (predicate, message) pair for scalar values
    :param choices: allowed values of a str field
    :param schema: nested schema of object and objects fields
    :param variants: type name -> nested schema of variant fields
    """

    def __init__(self, kind: str, default: Any = None, check: Optional[Tuple[Callable, str]] = None,
                 choices: Optional[Tuple[str, ...]] = None, schema: Optional[Dict[str, "_Field"]] = None,
                 variants: Optional[Dict[str, Dict[str, "_Field"]]] = None) -> None:
        self.kind = kind
        self.default = default
        self.check = check
        self.choices = choices
        self.schema = schema
        self.variants = variants


_POSITIVE = (lambda v: v > 0, "has to be > 0")
_NON_NEGATIVE = (lambda v: v >= 0, "has to be >= 0")
_UNIT = (lambda v: 0 <= v <= 1, "has to be within [0, 1]")
_AT_LEAST_ONE = (lambda v: v >= 1, "has to be >= 1")
_LEVELS = (lambda v: v >= 2, "has to be >= 2")


def _geometry_schema() -> Dict[str, _Field]:
    return {
        "length_m": _Field("float", const.default_length_m, _POSITIVE),
        "width_start_m": _Field("float", const.default_width_m, _POSITIVE),
        "width_end_m": _Field("float", const.default_width_m, _POSITIVE),
        "thickness_m": _Field("float", const.default_thickness_m, _POSITIVE)
    }


def _material_schema() -> Dict[str, _Field]:
    return {"stt_mobility": _Field("float", const.default_stt_mobility, _POSITIVE)}


def _mtj_schema() -> Dict[str, _Field]:
    # window defaults depend on the track length and are filled after validation
    return {
        "g_parallel_S": _Field("float", const.default_g_parallel_s, _POSITIVE),
        "g_antiparallel_S": _Field("float", const.default_g_antiparallel_s, _POSITIVE),
        "window_start_m": _Field("float", None, _NON_NEGATIVE),
        "window_end_m": _Field("float", None, _POSITIVE)
    }


_LEAK_VARIANTS = {
    "dipolar": {"drift_speed_mps": _Field("float", const.default_drift_speed_mps, _POSITIVE)},
    "anisotropy": {
        "mobility_mk": _Field("float", const.default_anisotropy_mobility, _POSITIVE),
        "k0_jm3": _Field("float", const.default_anisotropy_k0_jm3),
        "k_slope_jm4": _Field("float", const.default_anisotropy_slope_jm4, _NON_NEGATIVE)
    },
    "shape": {"mobility_ms": _Field("float", const.default_shape_mobility_ms, _POSITIVE)},
    "none": {}
}

_INHIBITION_VARIANTS = {
    "none": {},
    "wta": {},
    "partial": {"inhibit_displacement_m": _Field("float", _REQUIRED, _POSITIVE)}
}

SCHEMA = {
    "device": _Field("object", {}, schema={
        "geometry": _Field("object", {}, schema=_geometry_schema()),
        "leak": _Field("variant", "dipolar", variants=_LEAK_VARIANTS),
        "material": _Field("object", {}, schema=_material_schema()),
        "output_mtj": _Field("object", {}, schema=_mtj_schema()),
        "fire_position_m": _Field("float", None, _POSITIVE),
        "reset_position_m": _Field("float", 0.0, _NON_NEGATIVE),
        "hysteresis_m": _Field("float", const.default_hysteresis_m, _NON_NEGATIVE),
        "refractory_s": _Field("float", const.default_refractory_s, _NON_NEGATIVE),
        "supply_voltage_V": _Field("float", const.default_supply_voltage_v)
    }),
    "synapse": _Field("object", {}, schema={
        "geometry": _Field("object", {}, schema=_geometry_schema()),
        "material": _Field("object", {}, schema=_material_schema()),
        "barrier": _Field("object", {}, schema=_mtj_schema())
    }),
    "network": _Field("object", None, schema={
        "sense_resistance_ohm": _Field("float", const.default_sense_resistance_ohm, _POSITIVE),
        "output_pulse_s": _Field("float", const.default_output_pulse_s, _NON_NEGATIVE),
        "weight_seed": _Field("int", 0, _NON_NEGATIVE),
        "layers": _Field("objects", _REQUIRED, schema={
            "inputs": _Field("int", _REQUIRED, _AT_LEAST_ONE),
            "outputs": _Field("int", _REQUIRED, _AT_LEAST_ONE),
            "weights": _Field("matrix"),
            "weights_csv": _Field("str"),
            "differential": _Field("bool", True),
            "wire_resistance_per_segment_ohm": _Field("float", 0.0, _NON_NEGATIVE),
            "quantize_levels": _Field("int", None, _LEVELS)
        })
    }),
    "drive": _Field("object", {}, schema={
        "mode": _Field("str", "dc", choices=("dc", "rate", "square")),
        "values": _Field("floats", None, _UNIT),
        "v_max_V": _Field("float", const.default_v_max_v),
        "f_max_hz": _Field("float", const.default_f_max_hz, _POSITIVE),
        "pulse_width_s": _Field("float", const.default_pulse_width_s, _POSITIVE),
        "v_pulse_V": _Field("float", const.default_v_max_v),
        "seed": _Field("int", 0, _NON_NEGATIVE),
        "jitter_fraction": _Field("float", 0.0, _UNIT),
        "on_s": _Field("float", const.default_square_on_s, _POSITIVE),
        "off_s": _Field("float", const.default_square_off_s, _NON_NEGATIVE)
    }),
    "neuron_drive": _Field("object", {}, schema={
        "amplitude_A": _Field("float", const.default_neuron_drive_a),
        "start_s": _Field("float", 0.0, _NON_NEGATIVE),
        "on_s": _Field("float", const.default_square_on_s, _POSITIVE),
        "off_s": _Field("float", const.default_square_off_s, _NON_NEGATIVE)
    }),
    "simulation": _Field("object", {}, schema={
        "dt_s": _Field("float", const.default_dt_s, _POSITIVE),
        "t_end_s": _Field("float", const.default_t_end_s, _POSITIVE),
        "sample_stride": _Field("int", const.default_sample_stride, _AT_LEAST_ONE)
    }),
    "inhibition": _Field("variant", "none", variants=_INHIBITION_VARIANTS),
    "output": _Field("object", {}, schema={
        "trace_csv": _Field("str"),
        "events_csv": _Field("str"),
        "summary_csv": _Field("str"),
        "conductance_prefix": _Field("str")
    })
}
"""
schema of the experiment configuration
"""


def _join(path: str, key: str) -> str:
    return key if path == "" else "{}.{}".format(path, key)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _validate_scalar(field: _Field, value: Any, path: str, errors: List[str]) -> Any:
    """
    validates a single non-container value and returns the normalised value
    """
    if field.kind == "float":
        if not _is_number(value) or not math.isfinite(value):
            errors.append("{}: expected a finite number (got {!r})".format(path, value))
            return None
        value = float(value)
    elif field.kind == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            errors.append("{}: expected an integer (got {!r})".format(path, value))
            return None
    elif field.kind == "str":
        if not isinstance(value, str):
            errors.append("{}: expected a string (got {!r})".format(path, value))
            return None
        if field.choices is not None and value not in field.choices:
            errors.append("{}: '{}' is not one of {}".format(path, value, ", ".join(field.choices)))
            return None
    elif field.kind == "bool":
        if not isinstance(value, bool):
            errors.append("{}: expected true or false (got {!r})".format(path, value))
            return None
    if field.check is not None and not field.check[0](value):
        errors.append("{}: {} (is {})".format(path, field.check[1], value))
        return None
    return value


def _validate_field(field: _Field, value: Any, path: str, errors: List[str]) -> Any:
    """
    validates a value of any kind and returns the normalised value
    """
    if field.kind == "object":
        return _validate_object(field.schema, value, path, errors)

    if field.kind == "objects":
        if not isinstance(value, list) or len(value) == 0:
            errors.append("{}: expected a non-empty list of objects".format(path))
            return None
        return [_validate_object(field.schema, item, "{}[{}]".format(path, index), errors)
                for index, item in enumerate(value)]

    if field.kind == "variant":
        if not isinstance(value, dict):
            errors.append("{}: expected an object".format(path))
            return None
        variant_type = value.get("type", field.default)
        if variant_type not in field.variants:
            errors.append("{}: unknown type '{}' (expected one of {})".
                          format(_join(path, "type"), variant_type, ", ".join(field.variants)))
            return None
        rest = dict((key, item) for key, item in value.items() if key != "type")
        result = {"type": variant_type}
        result.update(_validate_object(field.variants[variant_type], rest, path, errors))
        return result

    if field.kind == "floats":
        if not isinstance(value, list):
            errors.append("{}: expected a list of numbers".format(path))
            return None
        return [_validate_scalar(_Field("float", check=field.check), item, "{}[{}]".format(path, index), errors)
                for index, item in enumerate(value)]

    if field.kind == "matrix":
        if not isinstance(value, list) or len(value) == 0 or not all(isinstance(row, list) for row in value):
            errors.append("{}: expected a non-empty list of rows".format(path))
            return None
        if any(len(row) != len(value[0]) for row in value) or len(value[0]) == 0:
            errors.append("{}: matrix rows differ in length".format(path))
            return None
        return [[_validate_scalar(_Field("float"), item, "{}[{}][{}]".format(path, i, j), errors)
                 for j, item in enumerate(row)] for i, row in enumerate(value)]

    return _validate_scalar(field, value, path, errors)


def _validate_object(schema: Dict[str, _Field], values: Any, path: str, errors: List[str]) -> dict:
    """
    validates a JSON object against a schema, fills defaults and reports unknown keys
    """
    if not isinstance(values, dict):
        errors.append("{}: expected an object".format(path if path != "" else "configuration"))
        return dict()

    for key in sorted(values):
        if key not in schema:
            errors.append("{}: unknown key".format(_join(path, key)))

    result = dict()
    for key, field in schema.items():
        key_path = _join(path, key)
        if key in values:
            result[key] = _validate_field(field, values[key], key_path, errors)
        elif field.default is _REQUIRED:
            errors.append("{}: missing required value".format(key_path))
        elif field.default is not None:
            default = {"type": field.default} if field.kind == "variant" else copy.deepcopy(field.default)
            result[key] = _validate_field(field, default, key_path, errors)
    return result


def _fill_windows(section: dict, geometry: dict, fractions: Tuple[float, float]) -> None:
    length = geometry["length_m"]
    section.setdefault("window_start_m", fractions[0] * length)
    section.setdefault("window_end_m", fractions[1] * length)


def _fill_derived(values: dict) -> None:
    """
    fills defaults depending on the track length
    """
    device = values["device"]
    _fill_windows(device["output_mtj"], device["geometry"], const.default_mtj_window_fractions)
    device.setdefault("fire_position_m", const.default_fire_fraction * device["geometry"]["length_m"])
    synapse = values["synapse"]
    _fill_windows(synapse["barrier"], synapse["geometry"], const.default_barrier_window_fractions)


def _neuron_from_values(device: dict) -> NeuronDevice:
    return NeuronDevice(TrackGeometry(**device["geometry"]), leak_from_dict(device["leak"]),
                        MaterialParams(**device["material"]), MtjStack(**device["output_mtj"]),
                        device["fire_position_m"], device["reset_position_m"], device["hysteresis_m"],
                        device["refractory_s"], device["supply_voltage_V"])


def _synapse_from_values(synapse: dict) -> SynapseDevice:
    return SynapseDevice(TrackGeometry(**synapse["geometry"]), MaterialParams(**synapse["material"]),
                         MtjStack(**synapse["barrier"]))


def _check_consistency(values: dict, errors: List[str]) -> None:
    """
    checks the physical consistency of a schema valid configuration
    """
    device = None
    try:
        device = _neuron_from_values(values["device"])
    except DomainException as e:
        errors.append("device: {}".format(e))
    try:
        _synapse_from_values(values["synapse"])
    except DomainException as e:
        errors.append("synapse: {}".format(e))

    inhibition = values["inhibition"]
    if device is not None and inhibition["type"] == "partial" and \
            inhibition["inhibit_displacement_m"] > device.geometry.length_m:
        errors.append("inhibition.inhibit_displacement_m: {} exceeds the track length {}".
                      format(inhibition["inhibit_displacement_m"], device.geometry.length_m))

    drive = values["drive"]
    if drive["mode"] == "rate" and drive["pulse_width_s"] >= 1.0 / drive["f_max_hz"]:
        errors.append("drive.pulse_width_s: pulse width {} s is not shorter than the period {} s".
                      format(drive["pulse_width_s"], 1.0 / drive["f_max_hz"]))

    network = values.get("network")
    if network is None:
        return
    layers = network["layers"]
    for index, layer in enumerate(layers):
        path = "network.layers[{}]".format(index)
        if index > 0 and layer["inputs"] != layers[index - 1]["outputs"]:
            errors.append("{}.inputs: {} does not match {} outputs of the previous layer".
                          format(path, layer["inputs"], layers[index - 1]["outputs"]))
        if "weights" in layer and "weights_csv" in layer:
            errors.append("{}: weights and weights_csv are mutually exclusive".format(path))
        if "weights" in layer:
            shape = (len(layer["weights"]), len(layer["weights"][0]))
            if shape != (layer["inputs"], layer["outputs"]):
                errors.append("{}.weights: shape {}x{} does not match {}x{}".
                              format(path, shape[0], shape[1], layer["inputs"], layer["outputs"]))
            elif not layer["differential"] and any(x < 0 for row in layer["weights"] for x in row):
                errors.append("{}.weights: negative weights need a differential layer".format(path))
    if "values" in drive and len(drive["values"]) != layers[0]["inputs"]:
        errors.append("drive.values: {} values for {} network inputs".format(len(drive["values"]),
                                                                             layers[0]["inputs"]))


class ExperimentConfig(object):
    """
    A validated experiment configuration. Objects are created by :func:`config_from_dict` or :func:`parse_config`.

    :param values: validated values with all defaults filled in
    :param raw: the values as given by the user
    :param base_dir: directory for resolving relative file names
    """

    def __init__(self, values: dict, raw: dict, base_dir: str = ".") -> None:
        self.__values = values
        self.__raw = raw
        self.base_dir = base_dir

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExperimentConfig):
            return NotImplemented
        return self.__values == other.values

    def __repr__(self) -> str:
        return "<ExperimentConfig({})>".format(json.dumps(self.__values, sort_keys=True))

    @property
    def values(self) -> dict:
        """
        deep copy of the validated values
        """
        return copy.deepcopy(self.__values)

    @property
    def raw(self) -> dict:
        """
        deep copy of the user supplied values
        """
        return copy.deepcopy(self.__raw)

    def get(self, path: str) -> Any:
        """
        Returns a value by its dotted key path

        :param path: dotted key path, e.g. "simulation.dt_s"
        :return: the value
        :raises ConfigException: if the path does not exist
        """
        value = self.__values
        for key in path.split("."):
            if not isinstance(value, dict) or key not in value:
                raise ConfigException("{}: no such configuration value".format(path))
            value = value[key]
        return copy.deepcopy(value)

    def has_network(self) -> bool:
        """
        True, if the configuration contains a network section
        """
        return self.__values.get("network") is not None

    def with_value(self, path: str, value: Any) -> "ExperimentConfig":
        """
        Returns a new, re-validated configuration with one value replaced. Length dependent defaults are derived
        again from the new values.

        :param path: dotted key path
        :param value: the new value
        :return: the new configuration
        :raises ConfigException: if the result is not valid
        """
        raw = self.raw
        target = raw
        keys = path.split(".")
        for key in keys[:-1]:
            if not isinstance(target.setdefault(key, dict()), dict):
                raise ConfigException("{}: is not a configuration section".format(key))
            target = target[key]
        target[keys[-1]] = value
        return config_from_dict(raw, self.base_dir)

    def resolve_path(self, path: str) -> str:
        """
        Returns path relative to the directory of the configuration file
        """
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def neuron_device(self) -> NeuronDevice:
        """
        Returns the configured neuron device
        """
        return _neuron_from_values(self.__values["device"])

    def synapse_template(self) -> SynapseDevice:
        """
        Returns the configured synapse, used as template for all crossbar devices
        """
        return _synapse_from_values(self.__values["synapse"])

    def inhibition(self) -> InhibitionPolicy:
        """
        Returns the configured inhibition policy
        """
        return inhibition_from_dict(self.__values["inhibition"])

    def simulation_config(self) -> SimulationConfig:
        """
        Returns the time stepping parameters together with the inhibition policy
        """
        simulation = self.__values["simulation"]
        return SimulationConfig(simulation["dt_s"], simulation["t_end_s"], self.inhibition(),
                                simulation["sample_stride"])

    def _require_network(self) -> dict:
        if not self.has_network():
            raise ConfigException("network: section is required for this command")
        return self.__values["network"]

    def weight_matrices(self) -> List[np.ndarray]:
        """
        Returns the weight matrix of every layer. Layers without weights get uniform random weights from
        network.weight_seed, within [-1, 1] for differential and [0, 1] for plain layers.

        :raises ConfigException: if a weight file is not valid
        """
        network = self._require_network()
        generator = np.random.default_rng(network["weight_seed"])
        result = list()
        for index, layer in enumerate(network["layers"]):
            shape = (layer["inputs"], layer["outputs"])
            if "weights" in layer:
                weights = np.array(layer["weights"], dtype=float)
            elif "weights_csv" in layer:
                weights = read_matrix_csv(self.resolve_path(layer["weights_csv"]))
                if weights.shape != shape:
                    raise ConfigException("network.layers[{}].weights_csv: shape {} does not match {}".
                                          format(index, weights.shape, shape))
            else:
                low = -1.0 if layer["differential"] else 0.0
                weights = generator.uniform(low, 1.0, shape)
            result.append(weights)
        return result

    def crossbar_layers(self) -> list:
        """
        Returns the mapped crossbar (CrossbarLayer or DifferentialLayer) of every layer
        """
        template = self.synapse_template()
        layers = list()
        for index, (layer, weights) in enumerate(zip(self._require_network()["layers"], self.weight_matrices())):
            try:
                if layer["differential"]:
                    crossbar, _ = build_differential_layer(weights, template, layer["wire_resistance_per_segment_ohm"],
                                                           layer.get("quantize_levels"))
                else:
                    crossbar, _ = build_positive_layer(weights, template, layer["wire_resistance_per_segment_ohm"],
                                                       layer.get("quantize_levels"))
            except DomainException as e:
                raise ConfigException("network.layers[{}]: {}".format(index, e))
            layers.append(crossbar)
        return layers

    def network(self) -> Network:
        """
        Returns the configured network, every neuron uses the configured device
        """
        network = self._require_network()
        device = self.neuron_device()
        layers = [(crossbar, [device] * crossbar.cols_M) for crossbar in self.crossbar_layers()]
        return Network(layers, network["sense_resistance_ohm"], network["output_pulse_s"])

    def network_drive(self) -> DriveWaveform:
        """
        Returns the word line drive of the first network layer. Without drive.values all inputs are driven with 1.
        """
        drive = self.__values["drive"]
        inputs = self._require_network()["layers"][0]["inputs"]
        values = drive.get("values", [1.0] * inputs)
        t_end = self.__values["simulation"]["t_end_s"]
        if drive["mode"] == "rate":
            return rate_encode(values, drive["f_max_hz"], drive["pulse_width_s"], drive["v_pulse_V"], t_end,
                               drive["seed"], drive["jitter_fraction"])
        if drive["mode"] == "square":
            return square_encode(values, drive["v_max_V"], drive["on_s"], drive["off_s"], t_end)
        return dc_encode(values, drive["v_max_V"])

    def neuron_drive(self) -> DriveWaveform:
        """
        Returns the square wave input current of a single neuron, starting at neuron_drive.start_s
        """
        drive = self.__values["neuron_drive"]
        t_end = self.__values["simulation"]["t_end_s"]
        if drive["off_s"] == 0:
            return DriveWaveform([[(drive["start_s"], math.inf, drive["amplitude_A"])]])
        period = drive["on_s"] + drive["off_s"]
        pulses = list()
        n = 0
        while drive["start_s"] + n * period < t_end:
            start = drive["start_s"] + n * period
            pulses.append((start, start + drive["on_s"], drive["amplitude_A"]))
            n += 1
        return DriveWaveform([pulses])

    def output_path(self, key: str) -> Optional[str]:
        """
        Returns the resolved path of output.<key> or None
        """
        path = self.__values["output"].get(key)
        return None if path is None else self.resolve_path(path)


def config_from_dict(values: dict, base_dir: str = ".") -> ExperimentConfig:
    """
    Validates configuration values

    :param values: configuration as parsed from JSON
    :param base_dir: directory for resolving relative file names
    :return: the validated configuration
    :raises ConfigException: with all detected problems
    """
    errors = list()
    result = _validate_object(SCHEMA, values, "", errors)
    if len(errors) == 0:
        _fill_derived(result)
        _check_consistency(result, errors)
    if len(errors) > 0:
        raise ConfigException(errors)
    return ExperimentConfig(result, copy.deepcopy(values), base_dir)


def parse_config(path: str) -> ExperimentConfig:
    """
    Reads and validates a JSON configuration file. Relative file names inside the configuration are resolved against
    the directory of the file.

    :param path: path of the JSON file
    :return: the validated configuration
    :raises ConfigException: if the file is missing, not JSON or not valid
    """
    try:
        with open(path, "r", encoding="utf-8") as config_file:
            values = json.load(config_file)
    except FileNotFoundError:
        raise ConfigException("{}: configuration file not found".format(path))
    except json.JSONDecodeError as e:
        raise ConfigException("{}: not a valid JSON file ({})".format(path, e))
    return config_from_dict(values, os.path.dirname(os.path.abspath(path)))


def dump_config(config: ExperimentConfig) -> str:
    """
    Returns the validated configuration as sorted, indented JSON. The result parses to an equal configuration.
    """
    return json.dumps(config.values, sort_keys=True, indent=2) + "\n"
