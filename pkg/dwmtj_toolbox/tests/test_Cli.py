# -*- coding: UTF-8 -*-
"""
This is a test module for the command line interface and the CSV outputs using unittest
"""

import contextlib
import io
import json
import numpy as np
import os
import tempfile
import unittest

from unittest import mock

import dwmtj_toolbox
from dwmtj_toolbox.cli import run_subcommand, sweep_point
from dwmtj_toolbox.config import config_from_dict, parse_config
from dwmtj_toolbox.constants import threads_env_var
from dwmtj_toolbox.csv_io import read_matrix_csv, write_matrix_csv

example_dir = os.path.join(os.path.dirname(dwmtj_toolbox.__file__), "example_configs")


def example(name: str) -> str:
    return os.path.join(example_dir, name)


def load_example(name: str) -> dict:
    with open(example(name)) as config_file:
        return json.load(config_file)


class TestCli(unittest.TestCase):
    """
    a unittest for run_subcommand
    """

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.environment = mock.patch.dict(os.environ, {threads_env_var: "1"})
        self.environment.start()

    def tearDown(self):
        self.environment.stop()
        self.directory.cleanup()

    def path(self, name: str) -> str:
        return os.path.join(self.directory.name, name)

    def run_cli(self, *argv: str):
        """
        runs the command line interface and returns exit code, stdout and stderr
        """
        stdout = io.StringIO()
        stderr = io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            code = run_subcommand(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()

    def write_config(self, name: str, values: dict) -> str:
        path = self.path(name)
        with open(path, "w") as config_file:
            json.dump(values, config_file)
        return path

    def read_lines(self, path: str):
        with open(path, "r", newline="") as csv_file:
            return csv_file.read().split("\n")[:-1]

    def test_usage_errors(self):
        """
        Missing or unknown subcommands exit with 1

        :return: Nothing
        :raises AssertionError: Raises AssertionError if a test fails
        """
        code, _, stderr = self.run_cli()
        self.assertEqual(code, 1)
        self.assertIn("usage", stderr)
        self.assertEqual(self.run_cli("teleport")[0], 1)
        self.assertEqual(self.run_cli("simulate-neuron", "--steps", "3")[0], 1)
        self.assertEqual(self.run_cli("--version")[0], 0)

    def test_config_errors(self):
        """
        Invalid configurations exit with 1 and name the offending key
        """
        path = self.write_config("invalid.json", {"simulation": {"dt_s": 0}})
        code, _, stderr = self.run_cli("simulate-neuron", "--config", path)
        self.assertEqual(code, 1)
        self.assertIn("error: simulation.dt_s", stderr)

        code, _, stderr = self.run_cli("simulate-network", "--config", example("neuron_dipolar.json"))
        self.assertEqual(code, 1)
        self.assertIn("network", stderr)
        self.assertEqual(self.run_cli("simulate-neuron", "--config", self.path("missing.json"))[0], 1)
        self.assertEqual(self.run_cli("sweep", "--config", example("neuron_dipolar.json"),
                                      "--out", self.path("s.csv"))[0], 1)

    def test_dump_config(self):
        """
        --dump-config prints the normalised configuration
        """
        code, stdout, _ = self.run_cli("simulate-network", "--config", example("network_wta.json"), "--dump-config",
                                       "--seed", "11")
        self.assertEqual(code, 0)
        config = config_from_dict(json.loads(stdout))
        self.assertEqual(config.get("drive.seed"), 11)
        self.assertEqual(config.get("network.weight_seed"), 11)
        self.assertEqual(config.get("inhibition.type"), "wta")

        code, stdout, _ = self.run_cli("simulate-neuron", "--dump-config")
        self.assertEqual(code, 0)
        self.assertEqual(config_from_dict(json.loads(stdout)), config_from_dict({}))

    def test_simulate_neuron(self):
        """
        Test the trace file of a single neuron run
        """
        out = self.path("trace.csv")
        code, stdout, _ = self.run_cli("simulate-neuron", "--config", example("neuron_dipolar.json"), "--out", out)
        self.assertEqual(code, 0)
        lines = self.read_lines(out)
        self.assertEqual(lines[0], "time_s,pos_0_0,mtj_0_0,i_bit_0_0")
        # 10000 steps with a sample every 10 steps
        self.assertEqual(len(lines), 1001)
        self.assertTrue(lines[1].startswith("1.00000000e-09,"), lines[1])
        self.assertRegex(stdout, r"spike_count=[1-9][0-9]*")

    def test_empty_trace(self):
        """
        A run without samples writes the header only
        """
        values = {"simulation": {"dt_s": 1e-9, "t_end_s": 1e-8, "sample_stride": 100},
                  "output": {"events_csv": "events.csv"}}
        path = self.write_config("short.json", values)
        out = self.path("empty.csv")
        code, stdout, _ = self.run_cli("simulate-neuron", "--config", path, "--out", out)
        self.assertEqual(code, 0)
        self.assertEqual(self.read_lines(out), ["time_s,pos_0_0,mtj_0_0,i_bit_0_0"])
        self.assertEqual(self.read_lines(self.path("events.csv")), ["time_s,layer,neuron"])
        self.assertIn("spike_count=0", stdout)

    def test_simulate_network(self):
        """
        Test the trace and event files of a network run
        """
        values = load_example("network_wta.json")
        values["output"] = {"trace_csv": "network.csv", "events_csv": "events.csv"}
        path = self.write_config("network.json", values)
        code, _, _ = self.run_cli("simulate-network", "--config", path)
        self.assertEqual(code, 0)
        lines = self.read_lines(self.path("network.csv"))
        self.assertEqual(lines[0], "time_s,pos_0_0,pos_0_1,pos_0_2,mtj_0_0,mtj_0_1,mtj_0_2,"
                                   "i_bit_0_0,i_bit_0_1,i_bit_0_2")
        self.assertEqual(len(lines), 1 + 2000)
        events = self.read_lines(self.path("events.csv"))
        self.assertEqual(events[0], "time_s,layer,neuron")
        self.assertGreater(len(events), 1)
        times = [float(line.split(",")[0]) for line in events[1:]]
        self.assertEqual(times, sorted(times))

    def test_determinism(self):
        """
        Two runs of every shipped example give byte identical files
        """
        for name in sorted(os.listdir(example_dir)):
            command = "simulate-network" if parse_config(example(name)).has_network() else "simulate-neuron"
            outputs = list()
            for run in range(2):
                out = self.path("{}_{}.csv".format(name, run))
                self.assertEqual(self.run_cli(command, "--config", example(name), "--out", out)[0], 0, name)
                with open(out, "rb") as csv_file:
                    outputs.append(csv_file.read())
            self.assertEqual(outputs[0], outputs[1], name)

    def test_verify(self):
        """
        verify reports a matching spike train for the shipped network
        """
        values = load_example("network_verify_4x3x2.json")
        values["simulation"]["t_end_s"] = 2e-6
        path = self.write_config("verify.json", values)
        code, stdout, _ = self.run_cli("verify", "--config", path)
        self.assertEqual(code, 0, stdout)
        self.assertIn("spike_count_match=true", stdout)

        out = self.path("report.txt")
        self.assertEqual(self.run_cli("verify", "--config", path, "--out", out)[0], 0)
        with open(out) as report:
            self.assertEqual(report.read(), stdout)

        self.assertEqual(self.run_cli("verify", "--config", example("neuron_shape.json"))[0], 1)

    def test_map_weights(self):
        """
        Test the conductance files for a weight file and for a configured network
        """
        weights_path = self.path("weights.csv")
        write_matrix_csv([[1.0, -0.5], [0.0, 2.0]], weights_path)
        prefix = self.path("g")
        code, stdout, _ = self.run_cli("map-weights", "--weights", weights_path, "--out", prefix)
        self.assertEqual(code, 0)
        printed = dict(line.split("=") for line in stdout.splitlines())
        self.assertAlmostEqual(float(printed["scale_S_per_unit"]), 2e-5, delta=1e-18)
        self.assertEqual(float(printed["g_floor_S"]), 1e-5)
        plus = read_matrix_csv(prefix + "_plus.csv")
        minus = read_matrix_csv(prefix + "_minus.csv")
        np.testing.assert_allclose(plus, [[3e-5, 1e-5], [1e-5, 5e-5]], rtol=1e-12)
        np.testing.assert_allclose(minus, [[1e-5, 2e-5], [1e-5, 1e-5]], rtol=1e-12)

        code, _, _ = self.run_cli("map-weights", "--config", example("network_verify_4x3x2.json"), "--out", prefix)
        self.assertEqual(code, 0)
        for suffix in ("_layer0_plus.csv", "_layer0_minus.csv", "_layer1_plus.csv", "_layer1_minus.csv"):
            self.assertTrue(os.path.isfile(prefix + suffix), suffix)
        self.assertEqual(read_matrix_csv(prefix + "_layer1_plus.csv").shape, (3, 2))

        code, _, _ = self.run_cli("map-weights", "--config", example("network_wta.json"), "--out", prefix)
        self.assertEqual(code, 0)
        self.assertEqual(read_matrix_csv(prefix + "_layer0.csv").shape, (4, 3))

        self.assertEqual(self.run_cli("map-weights", "--out", prefix)[0], 1)
        self.assertEqual(self.run_cli("map-weights", "--config", example("network_wta.json"))[0], 1)

    def test_sweep(self):
        """
        Test the sweep summary and the worker count check
        """
        out = self.path("summary.csv")
        code, _, _ = self.run_cli("sweep", "--config", example("neuron_dipolar.json"), "--param",
                                  "neuron_drive.amplitude_A", "--from", "4e-5", "--to", "1e-4", "--steps", "3",
                                  "--out", out)
        self.assertEqual(code, 0)
        lines = self.read_lines(out)
        self.assertEqual(lines[0], "neuron_drive.amplitude_A,spike_count,first_fire_s,mean_interval_s")
        self.assertEqual(len(lines), 4)
        self.assertEqual(lines[1], "4.00000000e-05,0,nan,nan")
        counts = [int(line.split(",")[1]) for line in lines[1:]]
        self.assertEqual(counts, sorted(counts))
        self.assertGreater(counts[-1], 1)

        with mock.patch.dict(os.environ, {threads_env_var: "zero"}):
            self.assertEqual(self.run_cli("sweep", "--config", example("neuron_dipolar.json"), "--param",
                                          "neuron_drive.amplitude_A", "--from", "4e-5", "--to", "1e-4",
                                          "--out", out)[0], 1)
        self.assertEqual(self.run_cli("sweep", "--config", example("neuron_dipolar.json"), "--param",
                                      "device.leak.type", "--from", "1", "--to", "2", "--out", out)[0], 1)
        self.assertEqual(self.run_cli("sweep", "--config", example("neuron_dipolar.json"), "--param",
                                      "simulation.dt_s", "--from", "-1", "--to", "1e-9", "--out", out)[0], 1)

    def test_sweep_point(self):
        """
        A single sweep point summarises the fire events of its run
        """
        config = parse_config(example("neuron_dipolar.json"))
        value, count, first, interval = sweep_point(1e-4, config)
        self.assertEqual(value, 1e-4)
        self.assertGreater(count, 1)
        self.assertGreater(first, 0)
        self.assertGreater(interval, 0)

    def test_database(self):
        """
        --db stores the run with all fire events
        """
        from dwmtj_toolbox.db_handler import DBHandler
        from dwmtj_toolbox.runs import SimulationRun

        url = "sqlite:///" + self.path("runs.sqlite")
        code, stdout, _ = self.run_cli("simulate-neuron", "--config", example("neuron_dipolar.json"), "--db", url)
        self.assertEqual(code, 0)
        handler = DBHandler(url)
        runs = SimulationRun.load_by_command_from_db("simulate-neuron", handler.get_session())
        self.assertEqual(len(runs), 1)
        self.assertIn("spike_count={}".format(runs[0].spike_count), stdout)
        self.assertEqual(runs[0].config["simulation"]["dt_s"], 1e-10)
        self.assertEqual(len(runs[0].spike_times()), runs[0].spike_count)
        handler.close_last_session()


if __name__ == "__main__":
    unittest.main()
