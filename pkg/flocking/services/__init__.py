"""
Flocking services package.

Each module owns one concern:
- geometry: domain types, angle wrapping and pairwise geometry
- sensing: visual signal synthesis, noise and visibility
- feedback: Cucker-Smale baseline and visually-guided control laws
- simulation: Euler stepping, scenarios and parameter sweeps
- analysis: dispersion, convergence, log decrement and flow profiles
- config_service: scenario documents
- command_service: the flock verbs and the run registry (needs Django set up,
  so it is imported directly rather than from here)
"""

from .geometry import AgentState, PairGeometry, SwarmParams, VisualSignal, pair_geometry, wrap_angle
from .sensing import NoiseBoundInput, NoiseParams, noise_bound, sense
from .feedback import ControlInput, DesiredRates, cs_acceleration, yfm_desired_rates
from .analysis import DispersionRecord, OscillationEstimate, dispersion, log_decrement
from .simulation import SimConfig, TrajectoryLog, run_scenario, run_sweep
from .config_service import parse_config

__all__ = [
    'AgentState', 'PairGeometry', 'SwarmParams', 'VisualSignal', 'pair_geometry', 'wrap_angle',
    'NoiseBoundInput', 'NoiseParams', 'noise_bound', 'sense',
    'ControlInput', 'DesiredRates', 'cs_acceleration', 'yfm_desired_rates',
    'DispersionRecord', 'OscillationEstimate', 'dispersion', 'log_decrement',
    'SimConfig', 'TrajectoryLog', 'run_scenario', 'run_sweep',
    'parse_config',
]
