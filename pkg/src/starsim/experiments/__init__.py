"""End-to-end protocols: surface-code Rabi, Fourier adder, LC orbits, deterministic T."""
from .adder import AdderCase, AdderResult, adder_circuit, run_adder, run_adder_cases
from .common import DEFAULT_SHOTS, DeviceRun, run_on_device
from .dett import DetTConfig, DetTResult, deterministic_t_circuit, deterministic_t_run, teleportation_table
from .graph_orbit import OrbitStep, graph_orbit_run
from .rabi import MODES, RabiPoint, encode_surface_code, fit_visibility, rabi_curve

__all__ = [
    "AdderCase", "AdderResult", "adder_circuit", "run_adder", "run_adder_cases",
    "DEFAULT_SHOTS", "DeviceRun", "run_on_device",
    "DetTConfig", "DetTResult", "deterministic_t_circuit", "deterministic_t_run", "teleportation_table",
    "OrbitStep", "graph_orbit_run",
    "MODES", "RabiPoint", "encode_surface_code", "fit_visibility", "rabi_curve",
]
