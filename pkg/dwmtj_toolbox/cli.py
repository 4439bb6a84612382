# -*- coding: UTF-8 -*-
"""
Command line interface of the toolbox. Every subcommand reads an experiment configuration (or uses the documented
defaults), runs the requested experiment and writes plot-ready CSV files. Exit codes: 0 on success, 1 on invalid
input, 2 on runtime errors.
"""

import argparse
import logging
import math
import numpy as np
import os
import sys

from concurrent.futures import ProcessPoolExecutor
from sqlalchemy.exc import SQLAlchemyError
from typing import List, Optional, Sequence, Tuple

from dwmtj_toolbox import __version__
from dwmtj_toolbox.config import ExperimentConfig, config_from_dict, dump_config, parse_config
from dwmtj_toolbox.constants import threads_env_var
from dwmtj_toolbox.crossbar import conductance_matrices
from dwmtj_toolbox.csv_io import read_matrix_csv, write_events_csv, write_matrix_csv, write_summary_csv, \
    write_trace_csv
from dwmtj_toolbox.exceptions import ConfigException, DatabaseException, DomainException, NumericalException, \
    UnsupportedConfigurationException
from dwmtj_toolbox.mapping import map_weights
from dwmtj_toolbox.network import SimTrace, run_network, simulate_neuron
from dwmtj_toolbox.oracle import verify_against_oracle

logger = logging.getLogger(__name__)

_VALIDATION_ERRORS = (ConfigException, DomainException, UnsupportedConfigurationException)
_RUNTIME_ERRORS = (NumericalException, DatabaseException, SQLAlchemyError, OSError)


class _ArgumentParser(argparse.ArgumentParser):
    """
    argparse parser which exits with 1 on usage errors
    """

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(1, "{}: error: {}\n".format(self.prog, message))


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    config = config_from_dict(dict()) if args.config is None else parse_config(args.config)
    if args.seed is not None:
        config = config.with_value("drive.seed", args.seed)
        if config.has_network():
            config = config.with_value("network.weight_seed", args.seed)
    return config


def _store_run(args: argparse.Namespace, config: ExperimentConfig, trace: SimTrace) -> None:
    if args.db is None:
        return
    # the ORM layer is only needed with --db
    from dwmtj_toolbox.db_handler import DBHandler
    from dwmtj_toolbox.runs import SimulationRun

    handler = DBHandler(args.db)
    session = handler.get_session()
    simulation = config.get("simulation")
    run = SimulationRun.from_trace(args.command, simulation["dt_s"], simulation["t_end_s"], dump_config(config),
                                   trace, session)
    run.save_to_db()
    logger.info("stored run %d with %d fire events in %s", run.id, run.spike_count, args.db)
    handler.close_last_session()


def _write_trace_outputs(args: argparse.Namespace, config: ExperimentConfig, trace: SimTrace) -> None:
    trace_path = args.out if args.out is not None else config.output_path("trace_csv")
    if trace_path is not None:
        write_trace_csv(trace, trace_path)
        logger.info("trace with %d samples written to %s", len(trace), trace_path)
    events_path = config.output_path("events_csv")
    if events_path is not None:
        write_events_csv(trace.events, events_path)
        logger.info("%d fire events written to %s", len(trace.events), events_path)
    print("spike_count={}".format(len(trace.events)))


def _cmd_simulate_neuron(args: argparse.Namespace, config: ExperimentConfig) -> int:
    trace = simulate_neuron(config.neuron_device(), config.neuron_drive(), config.simulation_config())
    _write_trace_outputs(args, config, trace)
    _store_run(args, config, trace)
    return 0


def _cmd_simulate_network(args: argparse.Namespace, config: ExperimentConfig) -> int:
    trace = run_network(config.network(), config.network_drive(), config.simulation_config())
    _write_trace_outputs(args, config, trace)
    _store_run(args, config, trace)
    return 0


def _run_experiment(config: ExperimentConfig) -> SimTrace:
    if config.has_network():
        return run_network(config.network(), config.network_drive(), config.simulation_config())
    return simulate_neuron(config.neuron_device(), config.neuron_drive(), config.simulation_config())


def sweep_point(value: float, config: ExperimentConfig) -> Tuple[float, int, float, float]:
    """
    Runs one sweep point and returns its summary row: parameter value, spike count, time of the first fire event and
    mean interval between successive fire events (nan if not defined)

    :param value: parameter value of this point
    :param config: configuration with the parameter already set
    :return: summary row
    """
    times = [event.time_s for event in _run_experiment(config).events]
    first = times[0] if len(times) > 0 else math.nan
    interval = float(np.mean(np.diff(times))) if len(times) > 1 else math.nan
    return float(value), len(times), first, interval


def _sweep_workers() -> int:
    value = os.environ.get(threads_env_var, "1")
    try:
        workers = int(value)
    except ValueError:
        raise ConfigException("{}: has to be an integer (is '{}')".format(threads_env_var, value))
    if workers < 1:
        raise ConfigException("{}: has to be >= 1 (is {})".format(threads_env_var, workers))
    return workers


def _sweep_configs(config: ExperimentConfig, param: str, values: Sequence[float]) -> List[ExperimentConfig]:
    current = config.get(param)
    integral = isinstance(current, int) and not isinstance(current, bool)
    if not (integral or isinstance(current, float)):
        raise ConfigException("{}: sweep parameter has to be a number".format(param))
    configs = list()
    errors = list()
    for value in values:
        try:
            configs.append(config.with_value(param, int(round(value)) if integral else float(value)))
        except ConfigException as e:
            errors.extend(["{}={}: {}".format(param, value, msg) for msg in e.errors])
    if len(errors) > 0:
        raise ConfigException(errors)
    return configs


def _cmd_sweep(args: argparse.Namespace, config: ExperimentConfig) -> int:
    if args.param is None or getattr(args, "from") is None or args.to is None:
        raise ConfigException("sweep: --param, --from and --to are required")
    if args.steps < 1:
        raise ConfigException("sweep: --steps has to be >= 1 (is {})".format(args.steps))
    summary_path = args.out if args.out is not None else config.output_path("summary_csv")
    if summary_path is None:
        raise ConfigException("output.summary_csv: sweep needs --out or output.summary_csv")

    values = np.linspace(getattr(args, "from"), args.to, args.steps).tolist()
    configs = _sweep_configs(config, args.param, values)
    workers = min(_sweep_workers(), len(configs))
    logger.info("sweeping %s over %d points with %d worker(s)", args.param, len(values), workers)

    if workers == 1:
        rows = [sweep_point(value, point) for value, point in zip(values, configs)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(sweep_point, values, configs))

    rows.sort(key=lambda row: row[0])
    write_summary_csv([args.param, "spike_count", "first_fire_s", "mean_interval_s"], rows, summary_path)
    logger.info("sweep summary written to %s", summary_path)
    return 0


def _cmd_map_weights(args: argparse.Namespace, config: ExperimentConfig) -> int:
    prefix = args.out if args.out is not None else config.output_path("conductance_prefix")
    if prefix is None:
        raise ConfigException("output.conductance_prefix: map-weights needs --out or output.conductance_prefix")

    if args.weights is not None:
        barrier = config.synapse_template().barrier
        g_plus, g_minus, mapping = map_weights(read_matrix_csv(args.weights), barrier.g_antiparallel_S,
                                               barrier.g_parallel_S)
        outputs = [("_plus.csv", g_plus), ("_minus.csv", g_minus)]
        print("scale_S_per_unit={:.17g}".format(mapping.scale_S_per_unit))
        print("g_floor_S={:.17g}".format(mapping.g_floor_S))
    elif config.has_network():
        outputs = list()
        for index, layer in enumerate(config.crossbar_layers()):
            matrices = conductance_matrices(layer)
            if len(matrices) == 2:
                outputs.append(("_layer{}_plus.csv".format(index), matrices[0]))
                outputs.append(("_layer{}_minus.csv".format(index), matrices[1]))
            else:
                outputs.append(("_layer{}.csv".format(index), matrices[0]))
    else:
        raise ConfigException("map-weights: needs --weights or a network section")

    for suffix, matrix in outputs:
        write_matrix_csv(matrix, prefix + suffix)
        logger.info("conductances written to %s%s", prefix, suffix)
    return 0


def _cmd_verify(args: argparse.Namespace, config: ExperimentConfig) -> int:
    simulation = config.simulation_config()
    report = verify_against_oracle(config.network(), config.network_drive(), simulation)
    text = report.to_text()
    if args.out is not None:
        with open(args.out, "w", newline="") as report_file:
            report_file.write(text)
    else:
        sys.stdout.write(text)

    events_path = config.output_path("events_csv")
    if events_path is not None:
        write_events_csv(report.device_trace.events, events_path)
    _store_run(args, config, report.device_trace)

    passed = report.spike_count_match and report.max_deviation_s <= 2 * simulation.dt_s
    if not passed:
        logger.warning("device network deviates from the abstract model (max deviation %g s)",
                       report.max_deviation_s)
    return 0 if passed else 2


def build_parser() -> argparse.ArgumentParser:
    """
    Returns the argument parser of the command line interface
    """
    common = _ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment configuration (JSON), documented defaults if omitted")
    common.add_argument("--out", help="main output file (trace, summary, report) or conductance file prefix")
    common.add_argument("--dump-config", action="store_true",
                        help="print the validated configuration with all defaults and exit")
    common.add_argument("--seed", type=int, help="overrides drive.seed and network.weight_seed")
    common.add_argument("--db", help="SQLAlchemy url of a results database, e.g. sqlite:///runs.sqlite")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug output")

    parser = _ArgumentParser(prog="dwmtj-sim", description="Behavioural DW-MTJ neuron, synapse and crossbar "
                                                           "network simulator")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p_neuron = sub.add_parser("simulate-neuron", parents=[common], help="single neuron driven by a current pulse train")
    p_neuron.set_defaults(func=_cmd_simulate_neuron)

    p_network = sub.add_parser("simulate-network", parents=[common], help="multilayer crossbar network")
    p_network.set_defaults(func=_cmd_simulate_network)

    p_sweep = sub.add_parser("sweep", parents=[common], help="vary one configuration value over a range")
    p_sweep.add_argument("--param", help="dotted key path, e.g. device.leak.drift_speed_mps")
    p_sweep.add_argument("--from", type=float, help="first parameter value")
    p_sweep.add_argument("--to", type=float, help="last parameter value")
    p_sweep.add_argument("--steps", type=int, default=5, help="number of points (default: 5)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_map = sub.add_parser("map-weights", parents=[common], help="convert weights into differential conductances")
    p_map.add_argument("--weights", help="weight matrix CSV (inputs x outputs), else the configured network")
    p_map.set_defaults(func=_cmd_map_weights)

    p_verify = sub.add_parser("verify", parents=[common], help="compare the device network with the abstract model")
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)-5.5s [%(name)s] %(message)s")
    logging.getLogger().setLevel(level)


def run_subcommand(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parses the arguments and runs the selected subcommand

    :param argv: command line arguments without the program name, default is sys.argv[1:]
    :return: exit code, 0 on success, 1 on invalid arguments or configuration, 2 on runtime errors
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if len(argv) == 0:
        parser.print_usage(sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    _configure_logging(args.verbose)
    try:
        config = _load_config(args)
        if args.dump_config:
            sys.stdout.write(dump_config(config))
            return 0
        logger.info("running %s", args.command)
        return args.func(args, config)
    except _VALIDATION_ERRORS as e:
        for msg in getattr(e, "errors", [str(e)]):
            print("error: {}".format(msg), file=sys.stderr)
        return 1
    except _RUNTIME_ERRORS as e:
        print("runtime error: {}".format(e), file=sys.stderr)
        return 2


def main() -> None:
    """
    Console entry point
    """
    sys.exit(run_subcommand())
