"""
Constants used throughout the flocking simulator.

This module centralizes the default model constants, the default
scenario, CSV schemas and message templates so the services share one
source for each value.
"""

import math
from typing import List


class FeedbackDefaults:
    """Default feedback and model constants."""

    BETA = 0.4
    H = 1.0
    K = 20.0
    L = 1.0  # meters
    ALPHA_MIN = 0.005  # rad

    # Extensions
    GAMMA = 0.0  # occlusion half-angle, rad; 0 disables the blind sectors
    V_FLOOR = 1e-6  # m/s
    SIGMA = 1.0  # Cucker-Smale kernel offset


class IntegrationDefaults:
    """Time stepping of the coupled system."""

    DT = 0.01  # seconds
    T_MAX = 200.0  # seconds
    N_AGENTS = 5
    SEED = 0


class InitialConditionDefaults:
    """Default random initial conditions."""

    X_RANGE = (0.0, 10.0)  # meters
    Y_RANGE = (0.0, 10.0)  # meters
    SPEED_RANGE = (0.5, 2.0)  # m/s
    HEADING_RANGE = (-math.pi, math.pi)
    MIN_SPACING = 0.5  # meters
    MAX_PLACEMENT_ATTEMPTS = 10000


class SensingLimits:
    """Clamps applied to synthesized measurements."""

    ALPHA_MARGIN = 1e-9  # noisy alpha is kept inside (margin, pi/2 - margin)


class AnalysisConfig:
    """Post-processing defaults."""

    CONVERGENCE_TOL_FRAC = 0.01
    ASYMPTOTE_TAIL_FRACTION = 0.1
    PEAK_FLOOR_FRAC = 1e-6  # peaks below this fraction of the largest deviation are ignored
    FLOW_RESOLUTION = math.pi / 180.0  # one degree
    OSCILLATION_AGENT = 0
    OSCILLATION_FIELD = 'theta'


class Modes:
    """Recognised enumeration values."""

    YFM = 'yfm'
    CS_ORACLE = 'cs'
    SIMULATION_MODES: List[str] = [YFM, CS_ORACLE]

    HEADING_LOOP = 'loop'
    HEADING_DIRECT = 'direct'
    HEADING_MODES: List[str] = [HEADING_LOOP, HEADING_DIRECT]

    ALPHA_RATE_TRUTH = 'truth'
    ALPHA_RATE_DIFFERENCE = 'difference'
    ALPHA_RATE_MODES: List[str] = [ALPHA_RATE_TRUTH, ALPHA_RATE_DIFFERENCE]

    SWEEP_AXES: List[str] = ['H', 'k', 'L', 'L_e', 'beta', 'sigma_q', 'sigma_a', 'Gamma']

    VERBS: List[str] = ['run', 'sweep', 'analyze', 'flowfield', 'noisebound']


class CsvSchemas:
    """Exact CSV headers written by the command layer."""

    TRAJECTORY: List[str] = ['t', 'agent', 'x', 'y', 'v', 'theta', 'omega']
    METRICS: List[str] = ['t', 'speed_spread', 'heading_spread']
    SWEEP_SUMMARY: List[str] = [
        'value', 'conv_time', 'final_speed_spread', 'final_heading_spread', 'n_peaks'
    ]
    OSCILLATION: List[str] = ['peak_time', 'zeta', 'omega_n']
    PROFILE: List[str] = ['bearing_rad', 'qdot_mag']

    TRAJECTORY_FILE = 'trajectory.csv'
    METRICS_FILE = 'metrics.csv'
    SWEEP_SUMMARY_FILE = 'sweep_summary.csv'
    OSCILLATION_FILE = 'oscillation.csv'
    PROFILE_FILE = 'profile.csv'

    FLOAT_FORMAT = '.17g'


class ValidationMessages:
    """Standard validation error messages."""

    UNKNOWN_KEY = "Unknown configuration key: {key}"
    INVALID_VALUE = "Invalid value for {key}: expected {expected}, got {value!r}"
    CONSTRAINT = "{field} must satisfy {constraint} (got {value!r})"
    MALFORMED_LINE = "Line {line_no}: expected 'key = value', got {line!r}"
    MALFORMED_OVERRIDE = "Override must look like key=value, got {override!r}"
    UNKNOWN_AXIS = "Unknown sweep axis: {axis}. Supported: {supported}"
    UNKNOWN_VERB = "Unknown verb: {verb}. Supported: {supported}"
    MISSING_CONFIG = "Configuration file not found: {path}"


class StatusMessages:
    """Standard status messages for command runs."""

    RUN_STARTED = "Run started"
    RUN_COMPLETED = "Run completed successfully"
    RUN_FAILED = "Run failed: {error_message}"
