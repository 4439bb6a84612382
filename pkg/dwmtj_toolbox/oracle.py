# -*- coding: UTF-8 -*-
"""
Abstract leaky integrate-and-fire reference model. A constant width DW neuron with a dipolar leak reduces exactly to
a normalised membrane m = x / L with gain = stt_mobility / (w * t * L), leak_rate = v_drift / L and
threshold = x_f / L. The abstract network below uses the same crossbars, output levels and inhibition as the device
network and serves as correctness oracle for :func:`dwmtj_toolbox.network.run_network`.
"""

import logging
import math

from typing import Dict, List, Optional, Sequence, Tuple

from dwmtj_toolbox.crossbar import output_currents
from dwmtj_toolbox.exceptions import ConfigException, UnsupportedConfigurationException
from dwmtj_toolbox.leak import DipolarField, NoLeak
from dwmtj_toolbox.network import DriveWaveform, Network, NoInhibition, PartialInhibition, SimTrace, \
    SimulationConfig, run_network, wordline_drive
from dwmtj_toolbox.neurons import FireEvent, NeuronDevice

logger = logging.getLogger(__name__)


class AbstractLifNeuron(object):
    """
    Normalised integrate-and-fire neuron

    :param threshold: fire threshold within (0, 1]
    :param leak_rate: membrane decay in 1/s (>= 0)
    :param gain: membrane rise per ampere in (1/s)/A
    :param membrane: membrane value within [0, 1]
    :param reset_level: membrane value after firing
    :param refractory_s: input is ignored for this time after firing
    """

    __slots__ = ("threshold", "leak_rate", "gain", "membrane", "reset_level", "refractory_s", "refractory_until_s",
                 "last_fire_time_s")

    def __init__(self, threshold: float, leak_rate: float, gain: float, membrane: float = 0.0,
                 reset_level: float = 0.0, refractory_s: float = 0.0) -> None:
        if not 0 < threshold <= 1:
            raise ConfigException("threshold has to be within (0, 1] (is {})".format(threshold))
        if not 0 <= membrane <= 1:
            raise ConfigException("membrane has to be within [0, 1] (is {})".format(membrane))
        self.threshold = float(threshold)
        self.leak_rate = float(leak_rate)
        self.gain = float(gain)
        self.membrane = float(membrane)
        self.reset_level = float(reset_level)
        self.refractory_s = float(refractory_s)
        self.refractory_until_s = 0.0
        self.last_fire_time_s = None

    def __repr__(self) -> str:
        return "<AbstractLifNeuron(membrane={}, threshold={}, leak_rate={}, gain={})>". \
            format(self.membrane, self.threshold, self.leak_rate, self.gain)

    @classmethod
    def from_device(cls, device: NeuronDevice) -> "AbstractLifNeuron":
        """
        Derives the abstract neuron of a constant width device with dipolar leak (or without leak)

        :param device: the device neuron
        :return: the equivalent abstract neuron
        :raises UnsupportedConfigurationException: if the device has no exact reduction
        """
        geometry = device.geometry
        if not geometry.is_rectangular():
            raise UnsupportedConfigurationException("tapered tracks have no exact abstract model ({})".
                                                    format(geometry))
        if isinstance(device.leak, DipolarField):
            drift = device.leak.drift_speed_mps
        elif isinstance(device.leak, NoLeak):
            drift = 0.0
        else:
            raise UnsupportedConfigurationException("leak mechanism '{}' has no exact abstract model".
                                                    format(device.leak.type_name))
        length = geometry.length_m
        gain = device.material.stt_mobility / (geometry.width_start_m * geometry.thickness_m * length)
        return cls(device.fire_position_m / length, drift / length, gain, device.reset_position_m / length,
                   device.reset_position_m / length, device.refractory_s)

    def copy(self) -> "AbstractLifNeuron":
        """
        Returns an independent copy
        """
        neuron = AbstractLifNeuron(self.threshold, self.leak_rate, self.gain, self.membrane, self.reset_level,
                                   self.refractory_s)
        neuron.refractory_until_s = self.refractory_until_s
        neuron.last_fire_time_s = self.last_fire_time_s
        return neuron


def lif_oracle_step(neuron: AbstractLifNeuron, input_current: float, dt: float,
                    t: float = 0.0) -> Tuple[AbstractLifNeuron, bool]:
    """
    Advances the abstract neuron by one step: m' = clamp(m + (gain * I - leak_rate) * dt, 0, 1). The neuron fires if
    the rising membrane reaches the threshold, the membrane is reset afterwards.

    :param neuron: neuron at time t (not changed)
    :param input_current: input current in amperes
    :param dt: time step
    :param t: time at the start of the step
    :return: the new neuron and True, if it fired
    :raises ConfigException: if dt is not > 0
    """
    if not dt > 0:
        raise ConfigException("dt_s: time step has to be > 0 (is {})".format(dt))
    current = input_current if t >= neuron.refractory_until_s else 0.0
    rate = neuron.gain * current - neuron.leak_rate
    membrane = min(max(neuron.membrane + rate * dt, 0.0), 1.0)
    new_neuron = neuron.copy()
    if rate > 0 and membrane >= neuron.threshold:
        fraction = (neuron.threshold - neuron.membrane) / (membrane - neuron.membrane) \
            if neuron.membrane < neuron.threshold else 0.0
        fire_time = t + fraction * dt
        new_neuron.membrane = neuron.reset_level
        new_neuron.last_fire_time_s = fire_time
        new_neuron.refractory_until_s = fire_time + neuron.refractory_s
        return new_neuron, True
    new_neuron.membrane = membrane
    return new_neuron, False


def _inhibit(neurons: List[AbstractLifNeuron], fired: List[int], devices: Sequence[NeuronDevice],
             policy) -> Tuple[List[AbstractLifNeuron], List[int]]:
    """
    mirrors the inhibition of the device network on abstract neurons
    """
    if len(fired) == 0 or isinstance(policy, NoInhibition):
        return neurons, fired
    winner = fired[0]
    for index, neuron in enumerate(neurons):
        if index == winner or (index in fired and not policy.exclusive):
            continue
        if isinstance(policy, PartialInhibition):
            neuron.membrane = max(neuron.membrane - policy.inhibit_displacement_m / devices[index].geometry.length_m,
                                  0.0)
        else:
            neuron.membrane = neuron.reset_level
    return neurons, [winner] if policy.exclusive else fired


def run_abstract_network(network: Network, drives: DriveWaveform, config: SimulationConfig) -> List[FireEvent]:
    """
    Runs the abstract counterpart of a device network with the same time stepping

    :param network: device network, all neurons need an exact abstract model
    :param drives: word line voltages of the first layer
    :param config: time stepping parameters
    :return: time ordered fire events
    :raises UnsupportedConfigurationException: if a neuron has no exact abstract model
    """
    layers = [[AbstractLifNeuron.from_device(device) for device in devices] for _, devices in network.layers]
    events = list()
    dt = config.dt_s
    for step in range(config.step_count):
        t = step * dt
        t_next = (step + 1) * dt
        voltages = drives.values_at(t)
        for index, (crossbar, devices) in enumerate(network.layers):
            currents = output_currents(crossbar, voltages)
            previous = layers[index]
            stepped = list()
            fired = list()
            for neuron_index, (neuron, current) in enumerate(zip(previous, currents)):
                new_neuron, did_fire = lif_oracle_step(neuron, float(current), dt, t)
                if did_fire:
                    fired.append(neuron_index)
                stepped.append(new_neuron)
            fired.sort(key=lambda neuron_index: (stepped[neuron_index].last_fire_time_s, neuron_index))
            if config.inhibition.exclusive:
                for neuron_index in fired[1:]:
                    stepped[neuron_index].last_fire_time_s = previous[neuron_index].last_fire_time_s
                    stepped[neuron_index].refractory_until_s = previous[neuron_index].refractory_until_s
            stepped, fired = _inhibit(stepped, fired, devices, config.inhibition)
            layers[index] = stepped

            outputs = list()
            for neuron_index, (neuron, device) in enumerate(zip(stepped, devices)):
                if neuron_index in fired:
                    events.append(FireEvent(neuron.last_fire_time_s, index, neuron_index))
                high = neuron_index in fired or (neuron.last_fire_time_s is not None and
                                                 t_next < neuron.last_fire_time_s + network.output_pulse_s)
                mtj = device.output_mtj
                outputs.append(device.supply_voltage_V * (mtj.g_parallel_S if high else mtj.g_antiparallel_S))
            voltages = wordline_drive(outputs, network.sense_resistance_ohm)
    events.sort()
    return events


class OracleReport(object):
    """
    Result of :func:`verify_against_oracle`

    :param max_deviation_s: largest spike time deviation of matched spikes
    :param spike_count_match: True, if every neuron fired equally often in both models
    :param neurons: per neuron tuples (layer, neuron, device count, oracle count, max deviation)
    :param device_trace: trace of the device level run
    """

    def __init__(self, max_deviation_s: float, spike_count_match: bool,
                 neurons: List[Tuple[int, int, int, int, float]], device_trace: Optional[SimTrace] = None) -> None:
        self.max_deviation_s = max_deviation_s
        self.spike_count_match = spike_count_match
        self.neurons = neurons
        self.device_trace = device_trace

    def __repr__(self) -> str:
        return "<OracleReport(max_deviation_s={}, spike_count_match={})>". \
            format(self.max_deviation_s, self.spike_count_match)

    def to_text(self) -> str:
        """
        Returns the report as "key=value" lines with fixed field names
        """
        lines = ["max_deviation_s={:.8e}".format(self.max_deviation_s),
                 "spike_count_match={}".format("true" if self.spike_count_match else "false")]
        for layer, neuron, device_count, oracle_count, deviation in self.neurons:
            lines.append("neuron_{}_{}: device_spikes={} oracle_spikes={} max_deviation_s={:.8e}".
                         format(layer, neuron, device_count, oracle_count, deviation))
        return "\n".join(lines) + "\n"


def _spike_times(events: Sequence[FireEvent]) -> Dict[Tuple[int, int], List[float]]:
    result = dict()
    for event in events:
        result.setdefault((event.layer, event.neuron), list()).append(event.time_s)
    return result


def verify_against_oracle(network: Network, drives: DriveWaveform, config: SimulationConfig) -> OracleReport:
    """
    Runs the device network and its abstract counterpart and compares the spike trains of every neuron. Spikes are
    matched in time order.

    :param network: device network of constant width dipolar (or leak free) neurons
    :param drives: word line voltages of the first layer
    :param config: time stepping parameters
    :return: the report
    :raises UnsupportedConfigurationException: if a neuron has no exact abstract model
    """
    for _, devices in network.layers:
        for device in devices:
            AbstractLifNeuron.from_device(device)

    trace = run_network(network, drives, config)
    oracle_events = run_abstract_network(network, drives, config)
    device_times = _spike_times(trace.events)
    oracle_times = _spike_times(oracle_events)

    neurons = list()
    max_deviation = 0.0
    match = True
    for layer_index, (_, devices) in enumerate(network.layers):
        for neuron_index in range(len(devices)):
            key = (layer_index, neuron_index)
            device_spikes = device_times.get(key, [])
            oracle_spikes = oracle_times.get(key, [])
            deviation = max([abs(a - b) for a, b in zip(device_spikes, oracle_spikes)], default=0.0)
            neurons.append((layer_index, neuron_index, len(device_spikes), len(oracle_spikes), deviation))
            max_deviation = max(max_deviation, deviation)
            match = match and len(device_spikes) == len(oracle_spikes)

    if not match:
        logger.warning("spike counts of device and oracle network differ")
    logger.info("oracle verification: max deviation %g s, count match %s", max_deviation, match)
    return OracleReport(max_deviation, match, neurons, trace)
