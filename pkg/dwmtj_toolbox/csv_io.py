# -*- coding: UTF-8 -*-
"""
CSV import and export of matrices, simulation traces, fire events and sweep summaries. All files use "\\n" line
endings and fixed number formats, identical results give byte identical files.
"""

import csv
import numpy as np

from typing import Iterable, List, Sequence

from dwmtj_toolbox.constants import csv_float_format, csv_matrix_format
from dwmtj_toolbox.exceptions import ConfigException
from dwmtj_toolbox.network import SimTrace
from dwmtj_toolbox.neurons import FireEvent


def _float(value: float) -> str:
    return csv_float_format.format(value)


def read_matrix_csv(path: str) -> np.ndarray:
    """
    Reads a row-major matrix of real numbers without header

    :param path: path of the CSV file
    :return: the matrix
    :raises ConfigException: if the file is ragged, empty or contains non-numeric values
    :raises OSError: if the file cannot be read
    """
    rows = list()
    with open(path, "r", newline="") as csv_file:
        for line_number, row in enumerate(csv.reader(csv_file), start=1):
            if len(row) == 0 or all(x.strip() == "" for x in row):
                continue
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                raise ConfigException("{}: line {} contains a non-numeric value".format(path, line_number))
    if len(rows) == 0:
        raise ConfigException("{}: matrix file is empty".format(path))
    if any(len(row) != len(rows[0]) for row in rows):
        raise ConfigException("{}: matrix rows differ in length".format(path))
    return np.array(rows, dtype=float)


def write_matrix_csv(matrix, path: str) -> None:
    """
    Writes a matrix row-major without header, values are written with full precision

    :param matrix: 2D matrix (e.g. conductances in siemens)
    :param path: output path
    :return: Nothing
    :raises OSError: if the file cannot be written
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="") as csv_file:
        writer = csv.writer(csv_file, lineterminator="\n")
        for row in matrix:
            writer.writerow([csv_matrix_format.format(x) for x in row])


def trace_header(trace: SimTrace) -> List[str]:
    """
    Returns the header of a trace file: time_s, pos_<l>_<n>..., mtj_<l>_<n>..., i_bit_<l>_<j>...
    """
    return ["time_s"] + ["pos_" + label for label in trace.neuron_labels] + \
           ["mtj_" + label for label in trace.neuron_labels] + ["i_bit_" + label for label in trace.current_labels]


def write_trace_csv(trace: SimTrace, path: str) -> None:
    """
    Writes a trace with one row per sample in time order. Floats are written in scientific notation with 9
    significant digits, MTJ states as 0 (antiparallel) or 1 (parallel).

    :param trace: the simulation trace
    :param path: output path
    :return: Nothing
    :raises OSError: if the file cannot be written
    """
    with open(path, "w", newline="") as csv_file:
        writer = csv.writer(csv_file, lineterminator="\n")
        writer.writerow(trace_header(trace))
        for time_s, positions, states, currents in zip(trace.times, trace.positions, trace.mtj_states,
                                                       trace.currents):
            writer.writerow([_float(time_s)] + [_float(x) for x in positions] + [str(int(x)) for x in states] +
                            [_float(x) for x in currents])


def write_events_csv(events: Iterable[FireEvent], path: str) -> None:
    """
    Writes fire events as time_s,layer,neuron rows

    :param events: time ordered fire events
    :param path: output path
    :return: Nothing
    :raises OSError: if the file cannot be written
    """
    with open(path, "w", newline="") as csv_file:
        writer = csv.writer(csv_file, lineterminator="\n")
        writer.writerow(["time_s", "layer", "neuron"])
        for event in events:
            writer.writerow([_float(event.time_s), event.layer, event.neuron])


def write_summary_csv(header: Sequence[str], rows: Iterable[Sequence], path: str) -> None:
    """
    Writes a summary table, floats in the trace number format

    :param header: column names
    :param rows: table rows
    :param path: output path
    :return: Nothing
    :raises OSError: if the file cannot be written
    """
    with open(path, "w", newline="") as csv_file:
        writer = csv.writer(csv_file, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_float(x) if isinstance(x, float) else x for x in row])
