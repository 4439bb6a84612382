# -*- coding: UTF-8 -*-
"""
Definition of package wide constants. All physical values are SI units. The default device parameters are round numbers
giving nanosecond to microsecond dynamics; every one of them can be overridden by the experiment configuration.
"""

from ._version import __version__

project_version = __version__.split('.')
"""
Current project version
"""

float_precision = 1e-12
"""
relative precision for float comparison
"""

# default domain wall track
default_length_m = 1e-6
default_width_m = 100e-9
default_thickness_m = 5e-9
default_stt_mobility = 5e-11
"""
current driven domain wall velocity per unit current density, (m/s)/(A/m^2)
"""

# default leak mechanisms
default_drift_speed_mps = 5.0
default_anisotropy_mobility = 1e-6
default_anisotropy_k0_jm3 = 8e5
default_anisotropy_slope_jm4 = 5e6
default_shape_mobility_ms = 1e-6

# default MTJ stack
default_g_parallel_s = 5e-5
default_g_antiparallel_s = 1e-5
default_supply_voltage_v = 0.1
default_fire_fraction = 0.8
"""
fire position as fraction of the track length
"""
default_mtj_window_fractions = (0.7, 1.0)
"""
output MTJ footprint of a neuron as fractions of the track length
"""
default_barrier_window_fractions = (0.05, 0.95)
"""
long tunnel barrier of a synapse as fractions of the track length
"""
default_hysteresis_m = 50e-9
default_refractory_s = 0.0

# network defaults
default_sense_resistance_ohm = 1e4
default_output_pulse_s = 0.0
default_v_max_v = 0.1
default_f_max_hz = 1e7
default_pulse_width_s = 20e-9
default_square_on_s = 50e-9
default_square_off_s = 50e-9
default_neuron_drive_a = 100e-6

# simulation defaults
default_dt_s = 1e-9
default_t_end_s = 1e-6
default_sample_stride = 1

# output formats
csv_float_format = "{:.8e}"
"""
scientific notation with 9 significant digits
"""
csv_matrix_format = "{:.17g}"
"""
lossless format for conductance and weight matrices
"""

threads_env_var = "DWMTJ_SIM_THREADS"
"""
environment variable capping the number of parallel sweep workers
"""
