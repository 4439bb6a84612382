# -*- coding: UTF-8 -*-
"""
This is a test module for the drive encoders, the inhibition policies and the network simulation using unittest
"""

import math
import numpy as np
import os
import unittest

import dwmtj_toolbox
from dwmtj_toolbox.config import parse_config
from dwmtj_toolbox.crossbar import CrossbarLayer, conductance_matrix, ideal_layer_currents
from dwmtj_toolbox.exceptions import ConfigException, DomainException
from dwmtj_toolbox.leak import DipolarField
from dwmtj_toolbox.mapping import build_positive_layer
from dwmtj_toolbox.network import DriveWaveform, Network, NoInhibition, PartialInhibition, SimTrace, \
    SimulationConfig, WinnerTakeAll, apply_inhibition, dc_encode, inhibition_from_dict, rate_encode, run_network, \
    simulate_neuron, square_encode, wordline_drive
from dwmtj_toolbox.neurons import NeuronDevice, NeuronState, initial_state
from dwmtj_toolbox.synapses import SynapseDevice

example_dir = os.path.join(os.path.dirname(dwmtj_toolbox.__file__), "example_configs")


class TestDriveWaveform(unittest.TestCase):
    """
    a unittest for the DriveWaveform class and the input encoders
    """

    def test_init(self):
        """
        Test the pulse validation and the value lookup

        :return: Nothing
        :raises AssertionError: Raises AssertionError if a test fails
        """
        drive = DriveWaveform([[(1e-8, 2e-8, 0.1), (0.0, 5e-9, 0.2)], []])
        self.assertEqual(drive.input_count, 2)
        self.assertEqual(drive.pulses(0), [(0.0, 5e-9, 0.2), (1e-8, 2e-8, 0.1)])
        self.assertEqual(drive.value_at(0, 0.0), 0.2)
        self.assertEqual(drive.value_at(0, 5e-9), 0.0)
        self.assertEqual(drive.value_at(0, 1e-8), 0.1)
        self.assertEqual(drive.value_at(0, 3e-8), 0.0)
        self.assertEqual(drive.value_at(1, 1e-8), 0.0)
        np.testing.assert_array_equal(drive.values_at(1.5e-8), [0.1, 0.0])
        self.assertAlmostEqual(drive.mean(0, 4e-8), (0.2 * 5e-9 + 0.1 * 1e-8) / 4e-8, delta=1e-15)

        self.assertRaises(ConfigException, DriveWaveform, [[(0.0, 2e-8, 0.1), (1e-8, 3e-8, 0.1)]])
        self.assertRaises(ConfigException, DriveWaveform, [[(-1e-9, 2e-8, 0.1)]])
        self.assertRaises(ConfigException, DriveWaveform, [[(2e-8, 2e-8, 0.1)]])
        self.assertRaises(ConfigException, DriveWaveform, [[(0.0, 2e-8, math.nan)]])

    def test_dc(self):
        """
        Constant drive scales the input values with v_max
        """
        drive = dc_encode([1.0, 0.5, 0.0], 0.2)
        np.testing.assert_allclose(drive.values_at(0.0), [0.2, 0.1, 0.0])
        np.testing.assert_allclose(drive.values_at(1.0), [0.2, 0.1, 0.0])
        self.assertEqual(drive.pulses(2), [])
        self.assertRaises(DomainException, dc_encode, [1.2], 0.2)
        self.assertRaises(DomainException, dc_encode, [-0.1], 0.2)

    def test_rate(self):
        """
        Pulse counts follow u * f_max, jittered pulses stay inside their period
        """
        drive = rate_encode([1.0, 0.5, 0.0], 1e7, 2e-8, 0.3, 1e-6)
        self.assertEqual(len(drive.pulses(0)), 10)
        self.assertEqual(len(drive.pulses(1)), 5)
        self.assertEqual(len(drive.pulses(2)), 0)
        self.assertEqual(drive.pulses(1)[1], (2e-7, 2e-7 + 2e-8, 0.3))

        jittered = rate_encode([1.0, 0.5], 1e7, 2e-8, 0.3, 1e-6, seed=5, jitter_fraction=1.0)
        for index, period in ((0, 1e-7), (1, 2e-7)):
            for n, (start, end, amplitude) in enumerate(jittered.pulses(index)):
                self.assertTrue(n * period <= start <= (n + 1) * period - 2e-8 + 1e-18,
                                "pulse {} of input {} starts at {}".format(n, index, start))
                self.assertAlmostEqual(end - start, 2e-8, delta=1e-18)
        self.assertEqual(jittered.pulses(0), rate_encode([1.0, 0.5], 1e7, 2e-8, 0.3, 1e-6, 5, 1.0).pulses(0))

        self.assertRaises(ConfigException, rate_encode, [1.0], 1e7, 1e-7, 0.3, 1e-6)
        self.assertRaises(ConfigException, rate_encode, [1.0], 0, 2e-8, 0.3, 1e-6)
        self.assertRaises(ConfigException, rate_encode, [1.0], 1e7, 2e-8, 0.3, 1e-6, 0, 1.5)
        self.assertRaises(DomainException, rate_encode, [2.0], 1e7, 2e-8, 0.3, 1e-6)

    def test_square(self):
        """
        Square waves repeat on_s + off_s until t_end
        """
        drive = square_encode([0.5, 1.0], 0.2, 5e-8, 5e-8, 2e-7)
        self.assertEqual(len(drive.pulses(0)), 2)
        self.assertAlmostEqual(drive.value_at(0, 2e-8), 0.1, delta=1e-15)
        self.assertEqual(drive.value_at(1, 7e-8), 0.0)
        self.assertAlmostEqual(drive.value_at(1, 1.2e-7), 0.2, delta=1e-15)
        self.assertEqual(square_encode([0.5], 0.2, 5e-8, 0.0, 2e-7).pulses(0), dc_encode([0.5], 0.2).pulses(0))
        self.assertRaises(ConfigException, square_encode, [0.5], 0.2, 0.0, 5e-8, 2e-7)

    def test_wordline_drive(self):
        """
        Output currents are converted with V = I * R_sense
        """
        np.testing.assert_allclose(wordline_drive([1e-6, 2e-6], 1e4), [0.01, 0.02])
        self.assertRaises(DomainException, wordline_drive, [1e-6], 0)


class TestInhibition(unittest.TestCase):
    """
    a unittest for the lateral inhibition policies
    """

    def setUp(self):
        self.states = [NeuronState(0.5e-6), NeuronState(0.7e-6), NeuronState(0.3e-6), NeuronState(0.0)]

    def test_none(self):
        """
        Without inhibition the states are unchanged
        """
        self.assertEqual(apply_inhibition(self.states, 3, NoInhibition()), self.states)

    def test_wta(self):
        """
        Winner-take-all resets all other neurons of the layer
        """
        result = apply_inhibition(self.states, 3, WinnerTakeAll())
        self.assertEqual([state.dw_position_m for state in result], [0.0, 0.0, 0.0, 0.0])

        device = NeuronDevice(leak=DipolarField(1.0), reset_position_m=0.1e-6)
        result = apply_inhibition(self.states, 1, WinnerTakeAll(), [device] * 4)
        self.assertEqual([state.dw_position_m for state in result], [0.1e-6, 0.7e-6, 0.1e-6, 0.1e-6])
        self.assertRaises(DomainException, apply_inhibition, self.states, 4, WinnerTakeAll())

    def test_partial(self):
        """
        Partial inhibition pushes the other neurons back and clamps at x = 0
        """
        states = [NeuronState(0.1e-6), NeuronState(0.5e-6), NeuronState(0.9e-6)]
        result = apply_inhibition(states, 2, PartialInhibition(0.2e-6))
        self.assertEqual(result[0].dw_position_m, 0.0)
        self.assertAlmostEqual(result[1].dw_position_m, 0.3e-6, delta=1e-18)
        self.assertEqual(result[2].dw_position_m, 0.9e-6)
        self.assertEqual(states[1].dw_position_m, 0.5e-6, "input states were changed")
        self.assertRaises(DomainException, PartialInhibition, 0)

    def test_from_dict(self):
        """
        Test the creation from configuration dictionaries
        """
        for policy in (NoInhibition(), WinnerTakeAll(), PartialInhibition(5e-8)):
            self.assertEqual(inhibition_from_dict(policy.to_dict()), policy)
        self.assertRaises(ConfigException, inhibition_from_dict, {"type": "lateral"})
        self.assertRaises(ConfigException, PartialInhibition(2e-6).check_devices, [NeuronDevice()])


class TestNetwork(unittest.TestCase):
    """
    a unittest for the Network and SimulationConfig classes and the simulation loop
    """

    def setUp(self):
        self.template = SynapseDevice()
        self.device = NeuronDevice(leak=DipolarField(0.5))
        self.first, _ = build_positive_layer([[0.2, 0.9, 0.5], [0.7, 0.1, 0.4]], self.template)
        self.second, _ = build_positive_layer([[0.5, 0.5], [1.0, 0.2], [0.3, 0.8]], self.template)

    def test_init(self):
        """
        Test the shape checks of the network

        :return: Nothing
        :raises AssertionError: Raises AssertionError if a test fails
        """
        network = Network([(self.first, [self.device] * 3), (self.second, [self.device] * 2)])
        self.assertEqual(network.shape, [2, 3, 2])
        self.assertEqual(network.input_width, 2)
        self.assertEqual(len(network.initial_states()[1]), 2)

        self.assertRaises(ConfigException, Network, [])
        self.assertRaises(ConfigException, Network, [(self.first, [self.device] * 2)])
        self.assertRaises(ConfigException, Network, [(self.first, [self.device] * 3), (self.first, [self.device] * 3)])
        with self.assertRaises(ConfigException) as context:
            Network([(self.first, [self.device] * 2)], sense_resistance_ohm=0, output_pulse_s=-1.0)
        self.assertEqual(len(context.exception.errors), 3, context.exception.message)

    def test_simulation_config(self):
        """
        Test the validation of the time stepping parameters
        """
        config = SimulationConfig(1e-9, 1e-6)
        self.assertEqual(config.step_count, 1000)
        self.assertIsInstance(config.inhibition, NoInhibition)
        with self.assertRaises(ConfigException) as context:
            SimulationConfig(0.0, 1e-6, sample_stride=0)
        self.assertEqual(len(context.exception.errors), 2)
        self.assertTrue(context.exception.errors[0].startswith("simulation.dt_s"))
        self.assertRaises(ConfigException, SimulationConfig, 1e-9, -1.0)

    def test_trace(self):
        """
        Samples are recorded every sample_stride steps without a row at t = 0
        """
        network = Network([(self.first, [self.device] * 3)])
        trace = run_network(network, dc_encode([1.0, 1.0], 1.0), SimulationConfig(1e-9, 1e-7, sample_stride=10))
        self.assertIsInstance(trace, SimTrace)
        self.assertEqual(len(trace), 10)
        self.assertAlmostEqual(trace.times[0], 1e-8, delta=1e-20)
        self.assertEqual(trace.neuron_labels, ["0_0", "0_1", "0_2"])
        self.assertEqual(len(trace.position_series(0, 2)), 10)
        self.assertEqual(trace.events, sorted(trace.events))
        self.assertRaises(ConfigException, run_network, network, dc_encode([1.0], 1.0), SimulationConfig())
        self.assertRaises(ConfigException, run_network, network, dc_encode([1.0, 1.0], 1.0),
                          SimulationConfig(inhibition=PartialInhibition(2e-6)))

    def test_unidirectional(self):
        """
        Changing the state of a downstream layer never changes the upstream layer
        """
        config = parse_config(os.path.join(example_dir, "network_verify_4x3x2.json"))
        config = config.with_value("simulation.dt_s", 1e-9).with_value("simulation.t_end_s", 1e-6) \
            .with_value("simulation.sample_stride", 1)
        network = config.network()
        drive = config.network_drive()
        simulation = config.simulation_config()
        reference = run_network(network, drive, simulation)

        generator = np.random.default_rng(11)
        for _ in range(3):
            states = network.initial_states()
            states[1] = [initial_state(device, float(x)) for device, x in
                         zip(network.layers[1][1], generator.uniform(0, 0.79e-6, 2))]
            trace = run_network(network, drive, simulation, states)
            for neuron in range(3):
                np.testing.assert_array_equal(trace.position_series(0, neuron), reference.position_series(0, neuron))
            self.assertEqual([event for event in trace.events if event.layer == 0],
                             [event for event in reference.events if event.layer == 0])

    def test_leak_mechanisms_pulsed(self):
        """
        For every leak mechanism the wall moves forward during every pulse and backwards between pulses
        """
        for name in ("neuron_dipolar.json", "neuron_anisotropy.json", "neuron_shape.json"):
            config = parse_config(os.path.join(example_dir, name))
            device = config.neuron_device()
            drive = config.neuron_drive()
            simulation = config.simulation_config()
            trace = simulate_neuron(device, drive, simulation)
            self.assertGreater(len(trace.events), 0, "{} does not fire".format(name))

            dt = simulation.dt_s
            length = device.geometry.length_m
            pulses = drive.pulses(0)
            fire_times = [event.time_s for event in trace.events]
            positions = trace.position_series()
            rising = 0
            falling = 0
            for index in range(len(trace) - 1):
                t_a, t_b = trace.times[index], trace.times[index + 1]
                x_a, x_b = positions[index], positions[index + 1]
                if not (0 < x_a < length and 0 < x_b < length):
                    continue
                if any(t_a - dt < t <= t_b + dt for t in fire_times):
                    continue
                if any(start + dt <= t_a and t_b <= end - dt for start, end, _ in pulses):
                    self.assertGreater(x_b, x_a, "{}: no integration in ({}, {}]".format(name, t_a, t_b))
                    rising += 1
                elif all(end <= t_a - dt or start >= t_b + dt for start, end, _ in pulses):
                    self.assertLess(x_b, x_a, "{}: no leak in ({}, {}]".format(name, t_a, t_b))
                    falling += 1
            self.assertGreater(rising, 0, name)
            self.assertGreater(falling, 0, name)


class TestWinnerTakeAll(unittest.TestCase):
    """
    a unittest for the winner-take-all behaviour of a whole layer
    """

    def setUp(self):
        self.template = SynapseDevice()
        self.device = NeuronDevice(leak=DipolarField(0.5))
        self.config = SimulationConfig(1e-9, 1e-6, WinnerTakeAll(), 100)

    def test_random_patterns(self):
        """
        Every presentation has exactly one firing neuron, the one with the largest ideal bit line current, also for
        nearly equal currents
        """
        generator = np.random.default_rng(2718)
        close_calls = 0
        for _ in range(100):
            crossbar, _ = build_positive_layer(generator.uniform(0.0, 1.0, (4, 3)), self.template)
            values = generator.uniform(0.5, 1.0, 4)
            currents = ideal_layer_currents(values, conductance_matrix(crossbar))
            ordered = np.sort(currents)
            if ordered[-1] < 1.1 * ordered[-2]:
                close_calls += 1

            trace = run_network(Network([(crossbar, [self.device] * 3)]), dc_encode(values, 1.0), self.config)
            self.assertGreater(len(trace.events), 0)
            self.assertEqual(trace.events[0].neuron, int(np.argmax(currents)))
            self.assertEqual(set(event.neuron for event in trace.events), {int(np.argmax(currents))},
                             "more than one firing neuron for currents {}".format(currents))
        self.assertGreater(close_calls, 0, "no pattern with nearly equal currents")

    def test_near_tie(self):
        """
        Nearly simultaneous fire events are resolved by the interpolated fire time, not by the index
        """
        # 0.5 nm further into the window gives about 0.07 % more conductance
        crossbar = CrossbarLayer([[self.template.with_position(0.5e-6), self.template.with_position(0.5005e-6)]])
        network = Network([(crossbar, [self.device] * 2)])
        trace = run_network(network, dc_encode([1.0], 1.0), self.config)
        self.assertGreater(len(trace.events), 0)
        self.assertEqual(set(event.neuron for event in trace.events), {1})

        free = run_network(network, dc_encode([1.0], 1.0), SimulationConfig(1e-9, 1e-6, NoInhibition(), 100))
        self.assertLess(free.fire_times(0, 1)[0], free.fire_times(0, 0)[0])
        self.assertLess(free.fire_times(0, 0)[0] - free.fire_times(0, 1)[0], 1e-9)

    def test_simultaneous_fire(self):
        """
        Simultaneous fire events are resolved in favour of the lowest index
        """
        crossbar = CrossbarLayer([[self.template.with_position(0.5e-6)] * 2] * 2)
        network = Network([(crossbar, [self.device] * 2)])
        drive = dc_encode([1.0, 1.0], 1.0)

        exclusive = run_network(network, drive, self.config)
        self.assertGreater(len(exclusive.events), 0)
        self.assertEqual(set(event.neuron for event in exclusive.events), {0})

        free = run_network(network, drive, SimulationConfig(1e-9, 1e-6, NoInhibition(), 100))
        self.assertEqual(len(free.fire_times(0, 0)), len(free.fire_times(0, 1)))
        self.assertEqual(free.fire_times(0, 0), free.fire_times(0, 1))

        partial = run_network(network, drive, SimulationConfig(1e-9, 1e-6, PartialInhibition(1e-7), 100))
        self.assertEqual(partial.fire_times(0, 0), partial.fire_times(0, 1))


if __name__ == "__main__":
    unittest.main()
