# -*- coding: UTF-8 -*-
"""
This module evaluates N x M synaptic crossbar layers. Word lines (rows) are driven with voltages, bit lines (columns)
are sensed at virtual ground. Two readouts are provided:

- the ideal model with lossless wires, I = G^T V
- a nodal analysis of the resistive mesh including one lumped wire resistor per segment

The nodal mesh is linear, therefore its transfer matrix is computed once per layer and reused for every time step
(:func:`effective_conductance_matrix`).
"""

import logging
import math
import numpy as np
import scipy.sparse as sparse

from scipy.sparse.linalg import splu
from typing import List, Sequence

from dwmtj_toolbox.exceptions import DomainException, NumericalException
from dwmtj_toolbox.synapses import SynapseDevice, synapse_conductance

logger = logging.getLogger(__name__)


class CrossbarLayer(object):
    """
    A crossbar layer with a single synapse at each word and bit line intersection. The synapse matrix is fixed after
    creation.

    :param synapses: N x M nested sequence of :class:`SynapseDevice` (row = word line, column = bit line)
    :param wire_resistance_per_segment_ohm: resistance of a wire segment between adjacent crossings
    :raises DomainException: if the matrix is empty or ragged or the wire resistance is negative
    :raises TypeError: if an element is not a SynapseDevice
    """

    def __init__(self, synapses: Sequence[Sequence[SynapseDevice]], wire_resistance_per_segment_ohm: float = 0.0) \
            -> None:
        rows = [tuple(row) for row in synapses]
        if len(rows) == 0 or len(rows[0]) == 0:
            raise DomainException("crossbar needs at least one row and one column")
        cols = len(rows[0])
        for index, row in enumerate(rows):
            if len(row) != cols:
                raise DomainException("crossbar row {} has {} synapses, expected {}".format(index, len(row), cols))
            for synapse in row:
                if not isinstance(synapse, SynapseDevice):
                    raise TypeError("crossbar element is not of type SynapseDevice ({})".format(type(synapse)))

        wire_resistance_per_segment_ohm = float(wire_resistance_per_segment_ohm)
        if not math.isfinite(wire_resistance_per_segment_ohm) or wire_resistance_per_segment_ohm < 0:
            raise DomainException("wire_resistance_per_segment_ohm has to be >= 0 (is {})".
                                  format(wire_resistance_per_segment_ohm))

        self.__synapses = tuple(rows)
        self.__wire_resistance = wire_resistance_per_segment_ohm
        self.__conductances = None
        self.__effective = None

    @classmethod
    def from_positions(cls, positions, template: SynapseDevice,
                       wire_resistance_per_segment_ohm: float = 0.0) -> "CrossbarLayer":
        """
        Creates a layer from a matrix of wall positions. All synapses share the parameters of template.

        :param positions: N x M array of wall positions in meters
        :param template: synapse providing geometry, material and barrier
        :param wire_resistance_per_segment_ohm: resistance of a wire segment
        :return: the new layer
        """
        positions = np.asarray(positions, dtype=float)
        if positions.ndim != 2:
            raise DomainException("positions have to be a 2D matrix (shape {})".format(positions.shape))
        return cls([[template.with_position(x) for x in row] for row in positions], wire_resistance_per_segment_ohm)

    def __repr__(self) -> str:
        return "<CrossbarLayer(rows_N={}, cols_M={}, wire_resistance_per_segment_ohm={})>". \
            format(self.rows_N, self.cols_M, self.__wire_resistance)

    @property
    def rows_N(self) -> int:
        """
        number of word lines (inputs)
        """
        return len(self.__synapses)

    @property
    def cols_M(self) -> int:
        """
        number of bit lines (outputs)
        """
        return len(self.__synapses[0])

    @property
    def synapses(self) -> tuple:
        """
        the synapse matrix as tuple of rows
        """
        return self.__synapses

    @property
    def wire_resistance_per_segment_ohm(self) -> float:
        """
        resistance of a single wire segment
        """
        return self.__wire_resistance

    def cached_conductances(self) -> np.ndarray:
        """
        Returns the (cached) conductance matrix. The returned array is read-only.
        """
        if self.__conductances is None:
            self.__conductances = conductance_matrix(self)
            self.__conductances.setflags(write=False)
        return self.__conductances

    def cached_effective_conductances(self) -> np.ndarray:
        """
        Returns the (cached) nodal transfer matrix. The returned array is read-only.
        """
        if self.__effective is None:
            self.__effective = effective_conductance_matrix(self)
            self.__effective.setflags(write=False)
        return self.__effective


class DifferentialLayer(object):
    """
    Signed weights realised by two crossbars with the same dimensions. The output is the difference of both bit line
    currents.

    :param plus: crossbar for positive weights
    :param minus: crossbar for negative weights
    :raises DomainException: if the dimensions differ
    """

    def __init__(self, plus: CrossbarLayer, minus: CrossbarLayer) -> None:
        if not (isinstance(plus, CrossbarLayer) and isinstance(minus, CrossbarLayer)):
            raise TypeError("both halves have to be of type CrossbarLayer")
        if (plus.rows_N, plus.cols_M) != (minus.rows_N, minus.cols_M):
            raise DomainException("differential halves differ in size: {}x{} vs {}x{}".
                                  format(plus.rows_N, plus.cols_M, minus.rows_N, minus.cols_M))
        self.plus = plus
        self.minus = minus

    def __repr__(self) -> str:
        return "<DifferentialLayer(plus={}, minus={})>".format(repr(self.plus), repr(self.minus))

    @property
    def rows_N(self) -> int:
        """
        number of word lines
        """
        return self.plus.rows_N

    @property
    def cols_M(self) -> int:
        """
        number of bit lines
        """
        return self.plus.cols_M


class NodalSolution(object):
    """
    Result of :func:`nodal_solve`

    :param word_node_voltages: N x M voltages of the word line nodes at each crossing
    :param bit_node_voltages: N x M voltages of the bit line nodes at each crossing
    :param bit_currents: M currents flowing into the virtual ground sense nodes
    """

    def __init__(self, word_node_voltages: np.ndarray, bit_node_voltages: np.ndarray,
                 bit_currents: np.ndarray) -> None:
        self.word_node_voltages = word_node_voltages
        self.bit_node_voltages = bit_node_voltages
        self.bit_currents = bit_currents

    def __repr__(self) -> str:
        return "<NodalSolution(bit_currents={})>".format(self.bit_currents.tolist())


def _voltage_vector(word_voltages, rows: int) -> np.ndarray:
    """
    converts the word voltages to a float vector of length rows

    :raises DomainException: if the length does not match or a value is not finite
    """
    voltages = np.asarray(word_voltages, dtype=float)
    if voltages.ndim != 1 or voltages.shape[0] != rows:
        raise DomainException("expected {} word line voltages, got shape {}".format(rows, voltages.shape))
    if not np.all(np.isfinite(voltages)):
        raise DomainException("word line voltages have to be finite")
    return voltages


def conductance_matrix(layer: CrossbarLayer) -> np.ndarray:
    """
    Returns the N x M conductance matrix of the layer

    :param layer: the crossbar layer
    :return: element (i, j) is the conductance of the synapse at word line i and bit line j
    """
    return np.array([[synapse_conductance(synapse) for synapse in row] for row in layer.synapses], dtype=float)


def ideal_layer_currents(word_voltages, conductances) -> np.ndarray:
    """
    Returns the bit line currents of an ideal crossbar, I_j = sum_i V_i * G_ij

    :param word_voltages: N word line voltages
    :param conductances: N x M conductance matrix
    :return: M bit line currents
    :raises DomainException: if the dimensions do not match
    """
    conductances = np.asarray(conductances, dtype=float)
    if conductances.ndim != 2:
        raise DomainException("conductance matrix has to be 2D (shape {})".format(conductances.shape))
    voltages = _voltage_vector(word_voltages, conductances.shape[0])
    return conductances.T @ voltages


def _mesh_system(layer: CrossbarLayer):
    """
    assembles the nodal conductance matrix of the resistive mesh and the matrix mapping word line drive voltages to
    the right hand side. Word node (i, j) has index i * M + j, bit node (i, j) has index N * M + i * M + j. Segments
    only join adjacent crossings: word node (i, 0) is held at the driver voltage and bit node (N - 1, j) at virtual
    ground, both as fixed-potential rows.
    """
    rows = layer.rows_N
    cols = layer.cols_M
    size = rows * cols
    g_wire = 1.0 / layer.wire_resistance_per_segment_ohm
    conductances = layer.cached_conductances()

    system = sparse.lil_matrix((2 * size, 2 * size), dtype=np.float64)
    drive = sparse.lil_matrix((2 * size, rows), dtype=np.float64)

    def connect(a: int, b: int, g: float) -> None:
        system[a, a] += g
        system[b, b] += g
        system[a, b] -= g
        system[b, a] -= g

    for i in range(rows):
        for j in range(cols):
            word = i * cols + j
            bit = size + word
            connect(word, bit, conductances[i, j])
            if j > 0:
                connect(word - 1, word, g_wire)
            if i > 0:
                connect(bit - cols, bit, g_wire)

    fixed = [i * cols for i in range(rows)] + [size + (rows - 1) * cols + j for j in range(cols)]
    for node in fixed:
        system[node, :] = 0.0
        system[node, node] = 1.0
    for i in range(rows):
        drive[i * cols, i] = 1.0

    return system.tocsc(), drive.tocsc()


def _sensed_currents(layer: CrossbarLayer, solution: np.ndarray) -> np.ndarray:
    """
    returns the currents flowing into virtual ground at the bottom of every bit line, for one solution vector or for
    the columns of a solution matrix. The bottom bit node is fed by its synapse and by the segment above.
    """
    rows = layer.rows_N
    cols = layer.cols_M
    size = rows * cols
    bottom = (rows - 1) * cols
    conductances = layer.cached_conductances()[rows - 1, :]
    if solution.ndim == 2:
        conductances = conductances[:, np.newaxis]
    currents = conductances * solution[bottom:bottom + cols]
    if rows > 1:
        above = size + bottom - cols
        currents = currents + solution[above:above + cols] / layer.wire_resistance_per_segment_ohm
    return currents


def _solve_mesh(layer: CrossbarLayer, rhs: np.ndarray) -> np.ndarray:
    """
    factorises the mesh and solves for one or more right hand sides

    :raises NumericalException: if the system is singular or the solution is not finite
    """
    system, drive = _mesh_system(layer)
    try:
        solver = splu(system)
    except RuntimeError as e:
        raise NumericalException("nodal system of {} is singular: {}".format(repr(layer), e))
    solution = solver.solve(drive.toarray() @ rhs)
    if not np.all(np.isfinite(solution)):
        raise NumericalException("nodal solution of {} is not finite".format(repr(layer)))
    return solution


def nodal_solve(layer: CrossbarLayer, word_voltages) -> NodalSolution:
    """
    Solves the resistive mesh of the layer. Each word and bit line is a chain of segment resistors, the synapses bridge
    the lines at each crossing, drivers sit at the left end of the word lines and the bit lines end in virtual ground
    at the bottom. Without wire resistance the ideal model is returned.

    :param layer: the crossbar layer
    :param word_voltages: N word line voltages
    :return: node voltages and bit line currents
    :raises DomainException: if the number of voltages does not match
    :raises NumericalException: if the system cannot be solved
    """
    rows = layer.rows_N
    cols = layer.cols_M
    voltages = _voltage_vector(word_voltages, rows)

    if layer.wire_resistance_per_segment_ohm == 0:
        return NodalSolution(np.repeat(voltages[:, np.newaxis], cols, axis=1), np.zeros((rows, cols)),
                             ideal_layer_currents(voltages, layer.cached_conductances()))

    logger.debug("nodal solve of %s", repr(layer))
    solution = _solve_mesh(layer, voltages)
    size = rows * cols
    word_nodes = solution[:size].reshape(rows, cols)
    bit_nodes = solution[size:].reshape(rows, cols)
    return NodalSolution(word_nodes, bit_nodes, _sensed_currents(layer, solution))


def effective_conductance_matrix(layer: CrossbarLayer) -> np.ndarray:
    """
    Returns the N x M transfer matrix G_eff of the layer including wire parasitics, so that the bit line currents are
    G_eff^T V for any drive V. One mesh solve per word line is needed.

    :param layer: the crossbar layer
    :return: effective conductance matrix
    :raises NumericalException: if the system cannot be solved
    """
    if layer.wire_resistance_per_segment_ohm == 0:
        return np.array(layer.cached_conductances())

    rows = layer.rows_N
    logger.debug("computing transfer matrix of %s", repr(layer))
    solution = _solve_mesh(layer, np.eye(rows))
    return _sensed_currents(layer, solution).T


def layer_currents(layer: CrossbarLayer, word_voltages) -> np.ndarray:
    """
    Returns the bit line currents of the layer, using the nodal model if the layer has wire resistance

    :param layer: the crossbar layer
    :param word_voltages: N word line voltages
    :return: M bit line currents
    """
    if layer.wire_resistance_per_segment_ohm == 0:
        return ideal_layer_currents(word_voltages, layer.cached_conductances())
    return ideal_layer_currents(word_voltages, layer.cached_effective_conductances())


def differential_layer_currents(word_voltages, diff: DifferentialLayer) -> np.ndarray:
    """
    Returns the signed bit line currents I_plus - I_minus

    :param word_voltages: N word line voltages
    :param diff: the differential layer
    :return: M signed currents
    :raises DomainException: if the number of voltages does not match
    """
    return layer_currents(diff.plus, word_voltages) - layer_currents(diff.minus, word_voltages)


def output_currents(layer, word_voltages) -> np.ndarray:
    """
    Returns the bit line currents of a plain or differential layer

    :param layer: :class:`CrossbarLayer` or :class:`DifferentialLayer`
    :param word_voltages: N word line voltages
    :return: M currents
    """
    if isinstance(layer, DifferentialLayer):
        return differential_layer_currents(word_voltages, layer)
    return layer_currents(layer, word_voltages)


def conductance_matrices(layer) -> List[np.ndarray]:
    """
    Returns the conductance matrices of a plain ([G]) or differential ([G_plus, G_minus]) layer
    """
    if isinstance(layer, DifferentialLayer):
        return [layer.plus.cached_conductances(), layer.minus.cached_conductances()]
    return [layer.cached_conductances()]
