# -*- coding: UTF-8 -*-
"""
Multilayer networks of crossbars and four-terminal neurons. The output MTJ of a neuron is not galvanically connected
to its DW track, its current is converted into the word line voltage of the next layer by a sense resistance. Signals
therefore only flow forward.

A time step evaluates all layers in order: bit line currents of layer k, stepping of the neurons of layer k, lateral
inhibition inside layer k, conversion of the neuron outputs into word line voltages of layer k + 1.
"""

import bisect
import logging
import math
import numpy as np

from typing import List, Optional, Sequence, Tuple

from dwmtj_toolbox.constants import default_dt_s, default_output_pulse_s, default_sample_stride, \
    default_sense_resistance_ohm, default_t_end_s
from dwmtj_toolbox.crossbar import CrossbarLayer, DifferentialLayer, output_currents
from dwmtj_toolbox.exceptions import ConfigException, DomainException
from dwmtj_toolbox.neurons import FireEvent, NeuronDevice, NeuronState, initial_state, \
    mtj_output_state, neuron_output_current, step_neuron

logger = logging.getLogger(__name__)


# inhibition policies

class InhibitionPolicy(object):
    """
    Base class of the lateral inhibition policies. It should be treated as abstract, no object should be created
    directly!
    """

    type_name = ""
    """
    name of the policy in the experiment configuration
    """

    exclusive = False
    """
    True, if only one neuron per layer may fire in a time step
    """

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InhibitionPolicy):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return "<{}({})>".format(type(self).__name__, self.to_dict())

    def inhibit(self, state: NeuronState, device: Optional[NeuronDevice]) -> NeuronState:
        """
        Returns the inhibited state of a single non-winning neuron
        """
        return state.copy()

    def check_devices(self, devices: Sequence[NeuronDevice]) -> None:
        """
        Checks the policy against the neurons of a layer

        :raises ConfigException: if the policy cannot be applied
        """
        pass

    def to_dict(self) -> dict:
        """
        Returns the policy as dictionary with the configuration key names
        """
        return {"type": self.type_name}


class NoInhibition(InhibitionPolicy):
    """
    Neurons of a layer do not interact
    """

    type_name = "none"


class WinnerTakeAll(InhibitionPolicy):
    """
    The first neuron to fire resets all other neurons of its layer
    """

    type_name = "wta"
    exclusive = True

    def inhibit(self, state: NeuronState, device: Optional[NeuronDevice]) -> NeuronState:
        new_state = state.copy()
        new_state.dw_position_m = 0.0 if device is None else device.reset_position_m
        if device is not None:
            new_state.mtj_state = mtj_output_state(new_state, device)
        return new_state


class PartialInhibition(InhibitionPolicy):
    """
    A fire event pushes all other neurons of the layer back by a fixed displacement (clamped at x = 0)

    :param inhibit_displacement_m: backward displacement in meters (> 0)
    :raises DomainException: if the displacement is not > 0
    """

    type_name = "partial"

    def __init__(self, inhibit_displacement_m: float) -> None:
        inhibit_displacement_m = float(inhibit_displacement_m)
        if not (math.isfinite(inhibit_displacement_m) and inhibit_displacement_m > 0):
            raise DomainException("inhibit_displacement_m has to be > 0 (is {})".format(inhibit_displacement_m))
        self.inhibit_displacement_m = inhibit_displacement_m

    def inhibit(self, state: NeuronState, device: Optional[NeuronDevice]) -> NeuronState:
        new_state = state.copy()
        new_state.dw_position_m = max(state.dw_position_m - self.inhibit_displacement_m, 0.0)
        if device is not None:
            new_state.mtj_state = mtj_output_state(new_state, device)
        return new_state

    def check_devices(self, devices: Sequence[NeuronDevice]) -> None:
        for device in devices:
            if self.inhibit_displacement_m > device.geometry.length_m:
                raise ConfigException("inhibition.inhibit_displacement_m: {} exceeds the track length {}".
                                      format(self.inhibit_displacement_m, device.geometry.length_m))

    def to_dict(self) -> dict:
        return {"type": self.type_name, "inhibit_displacement_m": self.inhibit_displacement_m}


def inhibition_from_dict(values: dict) -> InhibitionPolicy:
    """
    Creates an inhibition policy from a configuration dictionary

    :param values: dictionary with the key "type" and the policy parameters
    :return: the new policy
    :raises ConfigException: if the type is unknown
    """
    policy_type = values.get("type", NoInhibition.type_name)
    if policy_type == NoInhibition.type_name:
        return NoInhibition()
    if policy_type == WinnerTakeAll.type_name:
        return WinnerTakeAll()
    if policy_type == PartialInhibition.type_name:
        return PartialInhibition(values["inhibit_displacement_m"])
    raise ConfigException("inhibition.type: unknown inhibition policy '{}'".format(policy_type))


def apply_inhibition(layer_states: Sequence[NeuronState], winner_index: int, policy: InhibitionPolicy,
                     devices: Optional[Sequence[NeuronDevice]] = None) -> List[NeuronState]:
    """
    Applies lateral inhibition after neuron winner_index has fired. The winner is not changed. If the devices are
    given, the reset position and the MTJ state follow the devices, otherwise the reset position is x = 0.

    :param layer_states: states of all neurons of the layer
    :param winner_index: index of the firing neuron
    :param policy: inhibition policy
    :param devices: optional devices of the layer
    :return: list of new states
    :raises DomainException: if winner_index is not valid
    """
    if not 0 <= winner_index < len(layer_states):
        raise DomainException("winner index {} is not valid for a layer of {} neurons".
                              format(winner_index, len(layer_states)))
    result = list()
    for index, state in enumerate(layer_states):
        if index == winner_index:
            result.append(state.copy())
        else:
            result.append(policy.inhibit(state, None if devices is None else devices[index]))
    return result


# drive waveforms

class DriveWaveform(object):
    """
    Piecewise constant drive of several inputs. Each input carries a sorted list of non-overlapping pulses
    (start_s, end_s, amplitude); a pulse is active for start_s <= t < end_s. Amplitudes are word line voltages for
    networks and currents for directly driven neurons.

    :param channels: per input sequence of (start_s, end_s, amplitude) tuples
    :raises ConfigException: if pulses overlap or times are negative
    """

    def __init__(self, channels: Sequence[Sequence[Tuple[float, float, float]]]) -> None:
        self.__starts = list()
        self.__ends = list()
        self.__amplitudes = list()
        for index, channel in enumerate(channels):
            pulses = sorted((float(start), float(end), float(amplitude)) for start, end, amplitude in channel)
            last_end = 0.0
            for start, end, amplitude in pulses:
                if start < 0 or not end > start:
                    raise ConfigException("drive: pulse [{}, {}) of input {} is not valid".format(start, end, index))
                if start < last_end:
                    raise ConfigException("drive: pulses of input {} overlap at {} s".format(index, start))
                if not math.isfinite(amplitude):
                    raise ConfigException("drive: pulse amplitude of input {} is not finite".format(index))
                last_end = end
            self.__starts.append([pulse[0] for pulse in pulses])
            self.__ends.append([pulse[1] for pulse in pulses])
            self.__amplitudes.append([pulse[2] for pulse in pulses])

    def __repr__(self) -> str:
        return "<DriveWaveform(inputs={}, pulses={})>".format(self.input_count, [len(x) for x in self.__starts])

    @property
    def input_count(self) -> int:
        """
        number of driven inputs
        """
        return len(self.__starts)

    def pulses(self, index: int) -> List[Tuple[float, float, float]]:
        """
        Returns the pulses of input index as list of (start_s, end_s, amplitude)
        """
        return list(zip(self.__starts[index], self.__ends[index], self.__amplitudes[index]))

    def value_at(self, index: int, t: float) -> float:
        """
        Returns the amplitude of input index at time t
        """
        starts = self.__starts[index]
        position = bisect.bisect_right(starts, t) - 1
        if position >= 0 and t < self.__ends[index][position]:
            return self.__amplitudes[index][position]
        return 0.0

    def values_at(self, t: float) -> np.ndarray:
        """
        Returns the amplitudes of all inputs at time t
        """
        return np.array([self.value_at(index, t) for index in range(self.input_count)], dtype=float)

    def mean(self, index: int, t_end: float) -> float:
        """
        Returns the mean amplitude of input index over [0, t_end)
        """
        total = 0.0
        for start, end, amplitude in self.pulses(index):
            total += amplitude * max(min(end, t_end) - start, 0.0)
        return total / t_end


def _unit_values(values: Sequence[float]) -> List[float]:
    """
    checks, that all values are within [0, 1]

    :raises DomainException: if a value is outside of [0, 1]
    """
    result = [float(x) for x in values]
    for index, value in enumerate(result):
        if not 0 <= value <= 1:
            raise DomainException("drive value {} of input {} is outside of [0, 1]".format(value, index))
    return result


def dc_encode(values: Sequence[float], v_max: float) -> DriveWaveform:
    """
    Constant drive V_i = v_max * u_i for the whole run

    :param values: input values within [0, 1]
    :param v_max: drive amplitude for u = 1
    :return: the waveform
    :raises DomainException: if a value is outside of [0, 1]
    """
    values = _unit_values(values)
    return DriveWaveform([[(0.0, math.inf, v_max * u)] if u > 0 else [] for u in values])


def rate_encode(values: Sequence[float], f_max: float, pulse_width_s: float, v_pulse: float, t_end_s: float,
                seed: int = 0, jitter_fraction: float = 0.0) -> DriveWaveform:
    """
    Regular pulse trains with frequency u_i * f_max and amplitude v_pulse. With jitter_fraction > 0 each pulse start is
    shifted by a seeded uniform offset of at most jitter_fraction * (period - pulse_width_s), so pulses never overlap.

    :param values: input values within [0, 1]
    :param f_max: pulse frequency for u = 1
    :param pulse_width_s: width of a single pulse
    :param v_pulse: pulse amplitude
    :param t_end_s: end of the generated window
    :param seed: seed of the jitter generator
    :param jitter_fraction: jitter amount within [0, 1]
    :return: the waveform
    :raises DomainException: if a value is outside of [0, 1]
    :raises ConfigException: if the pulses would overlap
    """
    values = _unit_values(values)
    if not (f_max > 0 and pulse_width_s > 0 and t_end_s > 0):
        raise ConfigException("drive: f_max_hz, pulse_width_s and t_end_s have to be > 0")
    if pulse_width_s >= 1.0 / f_max:
        raise ConfigException("drive.pulse_width_s: pulse width {} s is not shorter than the period {} s".
                              format(pulse_width_s, 1.0 / f_max))
    if not 0 <= jitter_fraction <= 1:
        raise ConfigException("drive.jitter_fraction: has to be within [0, 1] (is {})".format(jitter_fraction))

    generator = np.random.default_rng(seed)
    channels = list()
    for u in values:
        pulses = list()
        if u > 0:
            frequency = u * f_max
            period = 1.0 / frequency
            n = 0
            while n / frequency < t_end_s:
                start = n / frequency
                if jitter_fraction > 0:
                    start += generator.uniform(0.0, jitter_fraction * (period - pulse_width_s))
                pulses.append((start, start + pulse_width_s, v_pulse))
                n += 1
        channels.append(pulses)
    return DriveWaveform(channels)


def square_encode(values: Sequence[float], v_max: float, on_s: float, off_s: float, t_end_s: float) -> DriveWaveform:
    """
    Square wave drive: v_max * u_i for on_s, then zero for off_s, repeated until t_end_s

    :param values: input values within [0, 1]
    :param v_max: amplitude for u = 1
    :param on_s: on time per period
    :param off_s: off time per period
    :param t_end_s: end of the generated window
    :return: the waveform
    :raises DomainException: if a value is outside of [0, 1]
    :raises ConfigException: if on_s <= 0 or off_s < 0
    """
    values = _unit_values(values)
    if not (on_s > 0 and off_s >= 0):
        raise ConfigException("drive: on_s has to be > 0 and off_s >= 0")
    if off_s == 0:
        return dc_encode(values, v_max)
    period = on_s + off_s
    starts = list()
    n = 0
    while n * period < t_end_s:
        starts.append(n * period)
        n += 1
    return DriveWaveform([[(start, start + on_s, v_max * u) for start in starts] if u > 0 else [] for u in values])


def wordline_drive(neuron_outputs, sense_resistance_ohm: float) -> np.ndarray:
    """
    Converts output MTJ currents into word line voltages, V_j = I_j * R_sense

    :param neuron_outputs: output currents of the neurons
    :param sense_resistance_ohm: sense resistance (> 0)
    :return: word line voltages
    :raises DomainException: if the sense resistance is not > 0
    """
    if not sense_resistance_ohm > 0:
        raise DomainException("sense resistance has to be > 0 (is {})".format(sense_resistance_ohm))
    return np.asarray(neuron_outputs, dtype=float) * sense_resistance_ohm


# network and simulation

class Network(object):
    """
    A strictly feed-forward chain of crossbar layers, each one followed by a row of neurons

    :param layers: sequence of (CrossbarLayer or DifferentialLayer, sequence of NeuronDevice)
    :param sense_resistance_ohm: converts output MTJ currents into word line voltages
    :param output_pulse_s: time after a fire event during which the output stays at the parallel level
    :raises ConfigException: if the network is malformed
    """

    def __init__(self, layers: Sequence[Tuple[object, Sequence[NeuronDevice]]],
                 sense_resistance_ohm: float = default_sense_resistance_ohm,
                 output_pulse_s: float = default_output_pulse_s) -> None:
        errors = list()
        layers = [(crossbar, tuple(neurons)) for crossbar, neurons in layers]
        if len(layers) == 0:
            errors.append("network.layers: at least one layer is needed")
        for index, (crossbar, neurons) in enumerate(layers):
            if not isinstance(crossbar, (CrossbarLayer, DifferentialLayer)):
                errors.append("network.layers[{}]: no crossbar layer ({})".format(index, type(crossbar)))
                continue
            if len(neurons) != crossbar.cols_M:
                errors.append("network.layers[{}]: {} neurons for {} bit lines".
                              format(index, len(neurons), crossbar.cols_M))
            if any(not isinstance(neuron, NeuronDevice) for neuron in neurons):
                errors.append("network.layers[{}]: neurons have to be of type NeuronDevice".format(index))
            if index > 0 and isinstance(layers[index - 1][0], (CrossbarLayer, DifferentialLayer)) and \
                    layers[index - 1][0].cols_M != crossbar.rows_N:
                errors.append("network.layers[{}]: {} inputs do not match {} outputs of the previous layer".
                              format(index, crossbar.rows_N, layers[index - 1][0].cols_M))
        if not sense_resistance_ohm > 0:
            errors.append("network.sense_resistance_ohm: has to be > 0 (is {})".format(sense_resistance_ohm))
        if not output_pulse_s >= 0:
            errors.append("network.output_pulse_s: has to be >= 0 (is {})".format(output_pulse_s))
        if len(errors) > 0:
            raise ConfigException(errors)

        self.__layers = tuple(layers)
        self.__sense = float(sense_resistance_ohm)
        self.__output_pulse = float(output_pulse_s)

    def __repr__(self) -> str:
        return "<Network(shape={}, sense_resistance_ohm={}, output_pulse_s={})>". \
            format(self.shape, self.__sense, self.__output_pulse)

    @property
    def layers(self) -> tuple:
        """
        tuple of (crossbar, neurons) pairs
        """
        return self.__layers

    @property
    def input_width(self) -> int:
        """
        number of word lines of the first layer
        """
        return self.__layers[0][0].rows_N

    @property
    def shape(self) -> List[int]:
        """
        input width followed by the neuron count of each layer
        """
        return [self.input_width] + [len(neurons) for _, neurons in self.__layers]

    @property
    def sense_resistance_ohm(self) -> float:
        """
        sense resistance between layers
        """
        return self.__sense

    @property
    def output_pulse_s(self) -> float:
        """
        duration of the output pulse after a fire event
        """
        return self.__output_pulse

    def initial_states(self) -> List[List[NeuronState]]:
        """
        Returns the reset states of all neurons
        """
        return [[initial_state(device) for device in neurons] for _, neurons in self.__layers]


class SimulationConfig(object):
    """
    Time stepping parameters of a run

    :param dt_s: time step (> 0)
    :param t_end_s: simulated time (> 0)
    :param inhibition: lateral inhibition policy
    :param sample_stride: a sample is recorded every sample_stride steps
    :raises ConfigException: if a parameter is invalid
    """

    def __init__(self, dt_s: float = default_dt_s, t_end_s: float = default_t_end_s,
                 inhibition: InhibitionPolicy = None, sample_stride: int = default_sample_stride) -> None:
        errors = list()
        if not (isinstance(dt_s, (int, float)) and math.isfinite(dt_s) and dt_s > 0):
            errors.append("simulation.dt_s: has to be > 0 (is {})".format(dt_s))
        if not (isinstance(t_end_s, (int, float)) and math.isfinite(t_end_s) and t_end_s > 0):
            errors.append("simulation.t_end_s: has to be > 0 (is {})".format(t_end_s))
        if not (isinstance(sample_stride, int) and sample_stride >= 1):
            errors.append("simulation.sample_stride: has to be an integer >= 1 (is {})".format(sample_stride))
        if len(errors) > 0:
            raise ConfigException(errors)
        self.dt_s = float(dt_s)
        self.t_end_s = float(t_end_s)
        self.inhibition = NoInhibition() if inhibition is None else inhibition
        self.sample_stride = sample_stride

    def __repr__(self) -> str:
        return "<SimulationConfig(dt_s={}, t_end_s={}, inhibition={}, sample_stride={})>". \
            format(self.dt_s, self.t_end_s, repr(self.inhibition), self.sample_stride)

    @property
    def step_count(self) -> int:
        """
        number of time steps needed to reach t_end_s
        """
        return max(int(math.ceil(self.t_end_s / self.dt_s - 1e-9)), 1)


class SimTrace(object):
    """
    Sampled result of a simulation run

    :param neuron_labels: "<layer>_<neuron>" label of each neuron column
    :param current_labels: "<layer>_<bit line>" label of each current column
    """

    def __init__(self, neuron_labels: Sequence[str], current_labels: Sequence[str]) -> None:
        self.neuron_labels = list(neuron_labels)
        self.current_labels = list(current_labels)
        self.times = list()
        self.positions = list()
        self.mtj_states = list()
        self.currents = list()
        self.events = list()

    def __repr__(self) -> str:
        return "<SimTrace(samples={}, neurons={}, events={})>".format(len(self.times), len(self.neuron_labels),
                                                                     len(self.events))

    def __len__(self) -> int:
        return len(self.times)

    def record(self, time_s: float, positions: Sequence[float], mtj_states: Sequence[int],
               currents: Sequence[float]) -> None:
        """
        Appends a sample
        """
        self.times.append(time_s)
        self.positions.append(list(positions))
        self.mtj_states.append(list(mtj_states))
        self.currents.append(list(currents))

    def position_series(self, layer: int = 0, neuron: int = 0) -> np.ndarray:
        """
        Returns the sampled DW positions of a single neuron
        """
        column = self.neuron_labels.index("{}_{}".format(layer, neuron))
        return np.array([row[column] for row in self.positions], dtype=float)

    def fire_times(self, layer: int = 0, neuron: int = 0) -> List[float]:
        """
        Returns the fire times of a single neuron in time order
        """
        return [event.time_s for event in self.events if event.layer == layer and event.neuron == neuron]


def _neuron_output(state: NeuronState, device: NeuronDevice, fired: bool, t_next: float,
                   output_pulse_s: float) -> float:
    """
    output current of a neuron at the end of a step, a fire event holds the output at the parallel level
    """
    if fired or (state.last_fire_time_s is not None and t_next < state.last_fire_time_s + output_pulse_s):
        return device.supply_voltage_V * device.output_mtj.g_parallel_S
    return neuron_output_current(state, device)


def _step_layer(states: List[NeuronState], devices: Sequence[NeuronDevice], currents: np.ndarray, t: float, dt: float,
                policy: InhibitionPolicy) -> Tuple[List[NeuronState], List[Optional[FireEvent]]]:
    """
    steps all neurons of a layer and applies the inhibition policy afterwards. The earliest interpolated fire time wins,
    the lowest index breaks ties
    """
    new_states = list()
    events = list()
    for state, device, current in zip(states, devices, currents):
        new_state, event = step_neuron(state, device, float(current), t, dt)
        new_states.append(new_state)
        events.append(event)

    fired = sorted((index for index, event in enumerate(events) if event is not None),
                   key=lambda index: (events[index].time_s, index))
    if len(fired) == 0 or isinstance(policy, NoInhibition):
        return new_states, events

    winner = fired[0]
    inhibited = apply_inhibition(new_states, winner, policy, devices)
    for index in fired[1:]:
        if policy.exclusive:
            # losing neuron: keep the pre step fire history
            inhibited[index].refractory_until_s = states[index].refractory_until_s
            inhibited[index].last_fire_time_s = states[index].last_fire_time_s
            events[index] = None
        else:
            inhibited[index] = new_states[index]
    return inhibited, events


def run_network(network: Network, drives: DriveWaveform, config: SimulationConfig,
                initial_states: Optional[Sequence[Sequence[NeuronState]]] = None) -> SimTrace:
    """
    Runs a fixed step simulation of the network. Fire events get the layer and neuron index of the firing neuron.

    :param network: the network
    :param drives: word line voltages of the first layer
    :param config: time stepping parameters
    :param initial_states: optional start states per layer, default is the reset state of every neuron
    :return: the sampled trace
    :raises ConfigException: if the drive does not match the network or the inhibition policy does not fit
    """
    if drives.input_count != network.input_width:
        raise ConfigException("drive: {} inputs for a network with {} word lines".
                              format(drives.input_count, network.input_width))
    for _, devices in network.layers:
        config.inhibition.check_devices(devices)

    if initial_states is None:
        states = network.initial_states()
    else:
        states = [[state.copy() for state in layer] for layer in initial_states]
        if [len(layer) for layer in states] != [len(devices) for _, devices in network.layers]:
            raise ConfigException("initial states do not match the network shape {}".format(network.shape))

    neuron_labels = ["{}_{}".format(index, neuron) for index, (_, devices) in enumerate(network.layers)
                     for neuron in range(len(devices))]
    current_labels = ["{}_{}".format(index, column) for index, (crossbar, _) in enumerate(network.layers)
                      for column in range(crossbar.cols_M)]
    trace = SimTrace(neuron_labels, current_labels)

    dt = config.dt_s
    steps = config.step_count
    logger.info("running network %s for %d steps of %g s", network.shape, steps, dt)

    for step in range(steps):
        t = step * dt
        t_next = (step + 1) * dt
        voltages = drives.values_at(t)
        step_currents = list()
        for index, (crossbar, devices) in enumerate(network.layers):
            currents = output_currents(crossbar, voltages)
            step_currents.extend(currents.tolist())
            states[index], events = _step_layer(states[index], devices, currents, t, dt, config.inhibition)
            outputs = list()
            for neuron, (state, device, event) in enumerate(zip(states[index], devices, events)):
                if event is not None:
                    trace.events.append(FireEvent(event.time_s, index, neuron))
                outputs.append(_neuron_output(state, device, event is not None, t_next, network.output_pulse_s))
            voltages = wordline_drive(outputs, network.sense_resistance_ohm)

        if (step + 1) % config.sample_stride == 0:
            trace.record(t_next, [state.dw_position_m for layer in states for state in layer],
                         [state.mtj_state.value for layer in states for state in layer], step_currents)

    trace.events.sort()
    logger.info("network run finished with %d fire events", len(trace.events))
    return trace


def simulate_neuron(device: NeuronDevice, drive: DriveWaveform, config: SimulationConfig,
                    start_position_m: float = None) -> SimTrace:
    """
    Runs a single neuron driven directly by an input current waveform. The recorded current column is the input
    current.

    :param device: the neuron
    :param drive: single input current waveform in amperes
    :param config: time stepping parameters (the inhibition policy is ignored)
    :param start_position_m: initial wall position, default is the reset position
    :return: the sampled trace
    :raises ConfigException: if the drive has not exactly one input
    """
    if drive.input_count != 1:
        raise ConfigException("neuron_drive: a single neuron needs exactly one input (got {})".
                              format(drive.input_count))
    state = initial_state(device, start_position_m)
    trace = SimTrace(["0_0"], ["0_0"])
    dt = config.dt_s
    steps = config.step_count
    logger.info("running single neuron for %d steps of %g s", steps, dt)
    for step in range(steps):
        t = step * dt
        current = drive.value_at(0, t)
        state, event = step_neuron(state, device, current, t, dt)
        if event is not None:
            trace.events.append(event)
        if (step + 1) % config.sample_stride == 0:
            trace.record((step + 1) * dt, [state.dw_position_m], [state.mtj_state.value], [current])
    return trace
