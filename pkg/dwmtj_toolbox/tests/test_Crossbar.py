# -*- coding: UTF-8 -*-
"""
This is a test module for the crossbar layers, the ideal readout and the nodal mesh analysis using unittest
"""

import numpy as np
import unittest

from hypothesis import given, settings, strategies as st

from dwmtj_toolbox.crossbar import CrossbarLayer, DifferentialLayer, conductance_matrix, \
    differential_layer_currents, effective_conductance_matrix, ideal_layer_currents, layer_currents, nodal_solve
from dwmtj_toolbox.exceptions import DomainException
from dwmtj_toolbox.synapses import SynapseDevice


def random_layer(generator: np.random.Generator, rows: int, cols: int, template: SynapseDevice,
                 wire_resistance: float = 0.0) -> CrossbarLayer:
    """
    creates a layer with uniformly distributed wall positions inside the barrier window
    """
    barrier = template.barrier
    positions = generator.uniform(barrier.window_start_m, barrier.window_end_m, (rows, cols))
    return CrossbarLayer.from_positions(positions, template, wire_resistance)


def relative_deviation(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.linalg.norm(actual - expected) / np.linalg.norm(expected))


voltage_vectors = st.lists(st.floats(min_value=-0.2, max_value=0.2), min_size=6, max_size=6)


class TestCrossbarLayer(unittest.TestCase):
    """
    a unittest for the CrossbarLayer and DifferentialLayer classes
    """

    def setUp(self):
        self.template = SynapseDevice()

    def test_init(self):
        """
        Test the validation of the synapse matrix

        :return: Nothing
        :raises AssertionError: Raises AssertionError if a test fails
        """
        layer = CrossbarLayer([[self.template] * 3] * 2)
        self.assertEqual(layer.rows_N, 2)
        self.assertEqual(layer.cols_M, 3)
        self.assertRaises(DomainException, CrossbarLayer, [])
        self.assertRaises(DomainException, CrossbarLayer, [[self.template] * 3, [self.template] * 2])
        self.assertRaises(DomainException, CrossbarLayer, [[self.template]], -1.0)
        self.assertRaises(TypeError, CrossbarLayer, [[self.template, 1e-5]])
        self.assertRaises(DomainException, DifferentialLayer, layer, CrossbarLayer([[self.template] * 3]))

    def test_cache(self):
        """
        Cached matrices are read-only and equal to the direct computation
        """
        layer = random_layer(np.random.default_rng(1), 3, 4, self.template, 10.0)
        cached = layer.cached_conductances()
        np.testing.assert_array_equal(cached, conductance_matrix(layer))
        self.assertIs(cached, layer.cached_conductances())
        with self.assertRaises(ValueError):
            cached[0, 0] = 1.0
        self.assertFalse(layer.cached_effective_conductances().flags.writeable)


class TestIdealReadout(unittest.TestCase):
    """
    a unittest for the ideal crossbar model
    """

    def setUp(self):
        self.template = SynapseDevice()
        self.generator = np.random.default_rng(2024)

    def test_matrix_vector_product(self):
        """
        The ideal readout equals a dense matrix vector product on random 8 x 8 instances
        """
        for _ in range(20):
            layer = random_layer(self.generator, 8, 8, self.template)
            voltages = self.generator.uniform(0.0, 0.2, 8)
            conductances = conductance_matrix(layer)
            expected = np.array([sum(voltages[i] * conductances[i, j] for i in range(8)) for j in range(8)])
            currents = ideal_layer_currents(voltages, conductances)
            np.testing.assert_allclose(currents, expected, rtol=1e-12, atol=0)
            np.testing.assert_allclose(layer_currents(layer, voltages), expected, rtol=1e-12, atol=0)

    def test_invalid(self):
        """
        Dimension mismatch and non-finite drives are rejected
        """
        conductances = np.full((3, 2), 1e-5)
        self.assertRaises(DomainException, ideal_layer_currents, [0.1, 0.1], conductances)
        self.assertRaises(DomainException, ideal_layer_currents, [0.1, np.nan, 0.1], conductances)
        self.assertRaises(DomainException, ideal_layer_currents, [0.1, 0.1, 0.1], np.ones(3))

    def test_differential(self):
        """
        The differential readout is the difference of both halves
        """
        plus = random_layer(self.generator, 4, 3, self.template)
        minus = random_layer(self.generator, 4, 3, self.template)
        voltages = self.generator.uniform(0, 0.1, 4)
        expected = (conductance_matrix(plus) - conductance_matrix(minus)).T @ voltages
        np.testing.assert_allclose(differential_layer_currents(voltages, DifferentialLayer(plus, minus)), expected,
                                   rtol=1e-12, atol=1e-18)


class TestNodalSolve(unittest.TestCase):
    """
    a unittest for the nodal analysis of the resistive mesh
    """

    def setUp(self):
        self.template = SynapseDevice()
        self.g_p = self.template.barrier.g_parallel_S
        self.generator = np.random.default_rng(7)

    def test_without_wires(self):
        """
        Without wire resistance the nodal solution equals the ideal model
        """
        layer = random_layer(self.generator, 8, 8, self.template)
        voltages = self.generator.uniform(0, 0.1, 8)
        solution = nodal_solve(layer, voltages)
        np.testing.assert_allclose(solution.bit_currents, ideal_layer_currents(voltages, conductance_matrix(layer)),
                                   rtol=1e-12, atol=0)
        np.testing.assert_array_equal(solution.bit_node_voltages, np.zeros((8, 8)))

    def test_kirchhoff_2x2(self):
        """
        Compare a 2 x 2 mesh with an independently assembled dense Kirchhoff system
        """
        r_seg = 50.0
        g_w = 1.0 / r_seg
        layer = random_layer(self.generator, 2, 2, self.template, r_seg)
        g = conductance_matrix(layer)
        v = np.array([0.1, 0.05])

        names = ["w00", "w01", "w10", "w11", "b00", "b01", "b10", "b11"]
        index = dict((name, k) for k, name in enumerate(names))
        edges = [("w00", "w01", g_w), ("w10", "w11", g_w), ("b00", "b10", g_w), ("b01", "b11", g_w),
                 ("w00", "b00", g[0, 0]), ("w01", "b01", g[0, 1]), ("w10", "b10", g[1, 0]), ("w11", "b11", g[1, 1])]
        laplacian = np.zeros((8, 8))
        for first, second, conductance in edges:
            i, j = index[first], index[second]
            laplacian[i, i] += conductance
            laplacian[j, j] += conductance
            laplacian[i, j] -= conductance
            laplacian[j, i] -= conductance

        # drivers hold the first word node, virtual ground the last bit node
        fixed = dict(w00=v[0], w10=v[1], b10=0.0, b11=0.0)
        free = [name for name in names if name not in fixed]
        free_index = [index[name] for name in free]
        fixed_index = [index[name] for name in fixed]
        fixed_values = np.array(list(fixed.values()))
        free_values = np.linalg.solve(laplacian[np.ix_(free_index, free_index)],
                                      -laplacian[np.ix_(free_index, fixed_index)] @ fixed_values)
        nodes = dict(fixed)
        nodes.update(zip(free, free_values))
        expected = np.array([g_w * nodes["b00"] + g[1, 0] * nodes["w10"],
                             g_w * nodes["b01"] + g[1, 1] * nodes["w11"]])

        solution = nodal_solve(layer, v)
        np.testing.assert_allclose(solution.bit_currents, expected, rtol=1e-9, atol=0)
        self.assertAlmostEqual(solution.word_node_voltages[1, 1], nodes["w11"], delta=1e-12)
        self.assertAlmostEqual(solution.word_node_voltages[0, 0], v[0], delta=1e-15)
        self.assertAlmostEqual(solution.bit_node_voltages[1, 0], 0.0, delta=1e-15)

    def test_current_conservation(self):
        """
        The currents leaving the word line drivers equal the sensed bit line currents
        """
        r_seg = 20.0
        layer = random_layer(self.generator, 4, 5, self.template, r_seg)
        g = conductance_matrix(layer)
        voltages = self.generator.uniform(0, 0.1, 4)
        solution = nodal_solve(layer, voltages)
        words = solution.word_node_voltages
        bits = solution.bit_node_voltages
        driver_currents = g[:, 0] * (words[:, 0] - bits[:, 0]) + (words[:, 0] - words[:, 1]) / r_seg
        self.assertAlmostEqual(float(np.sum(driver_currents)), float(np.sum(solution.bit_currents)),
                               delta=1e-9 * float(np.sum(np.abs(solution.bit_currents))))

    def test_single_line(self):
        """
        A single word line and a single bit line have no free segment nodes on the fixed side
        """
        layer = random_layer(self.generator, 1, 3, self.template, 10.0)
        solution = nodal_solve(layer, [0.1])
        self.assertTrue(np.all(solution.bit_currents > 0))
        self.assertTrue(np.all(solution.bit_currents <= 0.1 * conductance_matrix(layer)[0]))
        column = random_layer(self.generator, 3, 1, self.template, 10.0)
        self.assertEqual(nodal_solve(column, [0.1, 0.1, 0.1]).bit_currents.shape, (1,))

    def test_effective_matrix(self):
        """
        The transfer matrix reproduces the nodal solution for any drive
        """
        layer = random_layer(self.generator, 6, 4, self.template, 1.0 / self.g_p * 1e-3)
        effective = effective_conductance_matrix(layer)
        for _ in range(5):
            voltages = self.generator.uniform(0.0, 0.1, 6)
            np.testing.assert_allclose(ideal_layer_currents(voltages, effective),
                                       nodal_solve(layer, voltages).bit_currents, rtol=1e-9, atol=1e-18)
            np.testing.assert_allclose(layer_currents(layer, voltages), nodal_solve(layer, voltages).bit_currents,
                                       rtol=1e-9, atol=1e-18)

    def test_convergence(self):
        """
        The deviation from the ideal model shrinks monotonically with the wire resistance from 1e2 / g_P down to
        1e-5 / g_P. The first-order IR drop of a random 8 x 8 layer at 1e-3 / g_P is about 2.2e-2, so the bound is
        3e-2 there and 1e-2 one decade lower.
        """
        factors = [1e2, 1e1, 1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
        for _ in range(10):
            positions = self.generator.uniform(self.template.barrier.window_start_m,
                                               self.template.barrier.window_end_m, (8, 8))
            voltages = self.generator.uniform(0.01, 0.1, 8)
            ideal = None
            deviations = dict()
            for factor in factors:
                layer = CrossbarLayer.from_positions(positions, self.template, factor / self.g_p)
                if ideal is None:
                    ideal = ideal_layer_currents(voltages, conductance_matrix(layer))
                currents = nodal_solve(layer, voltages).bit_currents
                deviations[factor] = relative_deviation(currents, ideal)
                if factor <= 1e-3:
                    self.assertTrue(np.all(currents <= ideal), "nodal above ideal at {} / g_P".format(factor))
            ordered = [deviations[factor] for factor in factors]
            for coarse, fine in zip(ordered[:-1], ordered[1:]):
                self.assertLess(fine, coarse, "deviations not decreasing: {}".format(ordered))
            self.assertLess(deviations[1e-3], 3e-2)
            self.assertLess(deviations[1e-4], 1e-2)


class TestLinearReadout(unittest.TestCase):
    """
    a unittest for the linearity of the ideal and the nodal readout
    """

    def setUp(self):
        template = SynapseDevice()
        generator = np.random.default_rng(11)
        self.ideal = random_layer(generator, 6, 5, template)
        self.wired = random_layer(generator, 6, 5, template, 1e-2 / template.barrier.g_parallel_S)

    def readouts(self):
        return [lambda v: ideal_layer_currents(v, conductance_matrix(self.ideal)),
                lambda v: nodal_solve(self.wired, v).bit_currents]

    @settings(max_examples=50)
    @given(voltage_vectors, voltage_vectors)
    def test_superposition(self, first, second):
        """
        I(V1 + V2) = I(V1) + I(V2)
        """
        first = np.array(first)
        second = np.array(second)
        for readout in self.readouts():
            np.testing.assert_allclose(readout(first + second), readout(first) + readout(second),
                                       rtol=1e-9, atol=1e-14)

    @settings(max_examples=50)
    @given(voltage_vectors, st.floats(min_value=-10.0, max_value=10.0))
    def test_scaling(self, voltages, factor):
        """
        I(a * V) = a * I(V)
        """
        voltages = np.array(voltages)
        for readout in self.readouts():
            np.testing.assert_allclose(readout(factor * voltages), factor * readout(voltages), rtol=1e-9, atol=1e-14)


if __name__ == "__main__":
    unittest.main()
