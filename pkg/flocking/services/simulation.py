"""
Scenario engine.

Freezes the swarm, computes every agent's control from that snapshot,
then commits one explicit Euler step. Whole scenarios and parameter sweeps
are deterministic functions of their configuration (seed included).
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import CoincidentAgentsError, ConfigError, SimulationError
from ..utils.constants import (
    InitialConditionDefaults, IntegrationDefaults, Modes, ValidationMessages,
)
from .analysis import DispersionRecord, dispersion
from .feedback import ControlInput, control_from_rates, cs_desired_rates, yfm_desired_rates
from .geometry import AgentState, SwarmParams, VisualSignal, wrap_angle
from .sensing import NoiseParams, sense, stream_rng

logger = logging.getLogger(__name__)

Range = Tuple[float, float]


@dataclass(frozen=True)
class InitSpec:
    """
    Initial conditions: a sampling box or an explicit agent list.

    When ``agents`` is given it is used verbatim and the ranges are ignored.
    """

    x_range: Range = InitialConditionDefaults.X_RANGE
    y_range: Range = InitialConditionDefaults.Y_RANGE
    speed_range: Range = InitialConditionDefaults.SPEED_RANGE
    heading_range: Range = InitialConditionDefaults.HEADING_RANGE
    min_spacing: float = InitialConditionDefaults.MIN_SPACING
    agents: Optional[Tuple[AgentState, ...]] = None


@dataclass(frozen=True)
class SimConfig:
    """Everything one scenario run depends on."""

    n_agents: int = IntegrationDefaults.N_AGENTS
    mode: str = Modes.YFM
    params: SwarmParams = field(default_factory=SwarmParams)
    noise: NoiseParams = field(default_factory=NoiseParams)
    dt: float = IntegrationDefaults.DT
    t_max: float = IntegrationDefaults.T_MAX
    init: InitSpec = field(default_factory=InitSpec)
    seed: int = IntegrationDefaults.SEED
    heading_mode: str = Modes.HEADING_LOOP

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    def validate(self) -> None:
        """
        Check the scenario invariants, including the nested parameter sets.

        Raises:
            ConfigError: naming the first field that violates its constraint
        """
        init = self.init
        checks = [
            ('n_agents', self.n_agents >= 1, 'n_agents >= 1'),
            ('mode', self.mode in Modes.SIMULATION_MODES, f"mode in {Modes.SIMULATION_MODES}"),
            ('heading_mode', self.heading_mode in Modes.HEADING_MODES,
             f"heading_mode in {Modes.HEADING_MODES}"),
            ('dt', self.dt > 0 and math.isfinite(self.dt), 'dt > 0'),
            ('t_max', math.isfinite(self.t_max) and self.t_max >= self.dt, 't_max >= dt'),
            ('seed', 0 <= self.seed < 2 ** 64, '0 <= seed < 2**64'),
        ]
        for name, ok, constraint in checks:
            if not ok:
                raise ConfigError(ValidationMessages.CONSTRAINT.format(
                    field=name, constraint=constraint, value=getattr(self, name)
                ))

        init_checks = [
            ('x_range', init.x_range[0] <= init.x_range[1], 'x_min <= x_max'),
            ('y_range', init.y_range[0] <= init.y_range[1], 'y_min <= y_max'),
            ('speed_range', 0 < init.speed_range[0] <= init.speed_range[1],
             '0 < speed_min <= speed_max'),
            ('heading_range', init.heading_range[0] <= init.heading_range[1],
             'heading_min <= heading_max'),
            ('min_spacing', init.min_spacing >= 0, 'min_spacing >= 0'),
        ]
        if init.agents is None:
            for name, ok, constraint in init_checks:
                if not ok:
                    raise ConfigError(ValidationMessages.CONSTRAINT.format(
                        field=name, constraint=constraint, value=getattr(init, name)
                    ))
        else:
            if len(init.agents) != self.n_agents:
                raise ConfigError(ValidationMessages.CONSTRAINT.format(
                    field='agents', constraint='one entry per agent (n_agents)',
                    value=len(init.agents),
                ))
            if any(a.v <= 0 for a in init.agents):
                raise ConfigError(ValidationMessages.CONSTRAINT.format(
                    field='agents', constraint='strictly positive initial speeds',
                    value=[a.v for a in init.agents],
                ))

        self.params.validate()
        self.noise.validate()


@dataclass
class TrajectoryLog:
    """Logged states and dispersion metrics, one entry per timestep."""

    times: List[float]
    states: List[Tuple[AgentState, ...]]
    metrics: List[DispersionRecord]

    @property
    def n_agents(self) -> int:
        return len(self.states[0]) if self.states else 0

    def series(self, agent: int, field_name: str) -> np.ndarray:
        """One agent's state variable over time."""
        if not 0 <= agent < self.n_agents:
            raise IndexError(f"Agent {agent} is out of range for {self.n_agents} agents")
        return np.array([getattr(snapshot[agent], field_name) for snapshot in self.states])


def initial_swarm(config: SimConfig) -> List[AgentState]:
    """
    Initial agent states.

    Random placements are drawn from their own stream (seeded by the run seed
    alone) by rejection sampling until every pair is at least ``min_spacing``
    apart. Speeds and headings are drawn after all positions; omega starts at 0.

    Raises:
        ConfigError: if the box cannot hold the agents at the requested spacing
    """
    init = config.init
    if init.agents is not None:
        return list(init.agents)

    rng = np.random.default_rng(np.random.SeedSequence([config.seed]))
    positions: List[Tuple[float, float]] = []
    attempts = 0
    while len(positions) < config.n_agents:
        if attempts >= InitialConditionDefaults.MAX_PLACEMENT_ATTEMPTS:
            raise ConfigError(
                f"Could not place {config.n_agents} agents with min_spacing "
                f"{init.min_spacing} after {attempts} attempts"
            )
        attempts += 1
        x = rng.uniform(*init.x_range)
        y = rng.uniform(*init.y_range)
        if all(math.hypot(x - px, y - py) >= init.min_spacing for px, py in positions):
            positions.append((float(x), float(y)))
    logger.debug(f"Placed {config.n_agents} agents in {attempts} attempts")

    speeds = rng.uniform(*init.speed_range, size=config.n_agents)
    headings = rng.uniform(*init.heading_range, size=config.n_agents)
    return [
        AgentState(x=px, y=py, v=float(v), theta=wrap_angle(float(h)), omega=0.0)
        for (px, py), v, h in zip(positions, speeds, headings)
    ]


def euler_step(
    swarm: Sequence[AgentState], controls: Sequence[ControlInput], dt: float
) -> List[AgentState]:
    """One explicit forward-Euler step; every derivative uses the pre-step state."""
    if len(swarm) != len(controls):
        raise ValueError(f"Got {len(controls)} controls for {len(swarm)} agents")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")

    stepped = []
    for s, u in zip(swarm, controls):
        stepped.append(AgentState(
            x=s.x + s.v * math.cos(s.theta) * dt,
            y=s.y + s.v * math.sin(s.theta) * dt,
            v=s.v + u.u_v * dt,
            theta=wrap_angle(s.theta + s.omega * dt),
            omega=s.omega + u.u_omega * dt,
        ))
    return stepped


def _step_controls(
    config: SimConfig,
    swarm: Sequence[AgentState],
    step: int,
    previous: Optional[List[List[VisualSignal]]],
) -> Tuple[List[AgentState], List[ControlInput], Optional[List[List[VisualSignal]]]]:
    params = config.params
    noise = config.noise
    direct = config.heading_mode == Modes.HEADING_DIRECT

    frame: List[AgentState] = []
    controls: List[ControlInput] = []
    sensed: Optional[List[List[VisualSignal]]] = [] if config.mode == Modes.YFM else None

    for i, si in enumerate(swarm):
        if config.mode == Modes.YFM:
            rng = stream_rng(config.seed, step, i) if noise.is_active else None
            signals = sense(
                swarm, i, params, noise, rng=rng,
                previous=previous[i] if previous else None,
                dt=config.dt,
            )
            sensed.append(signals)
            rates = yfm_desired_rates(signals, si.v, si.omega, si.theta, params)
        else:
            rates = cs_desired_rates(swarm, i, params)

        if direct:
            frame.append(replace(si, omega=rates.theta_dot_star))
            controls.append(ControlInput(u_v=rates.v_dot_star, u_omega=0.0))
        else:
            frame.append(si)
            controls.append(control_from_rates(rates, si.omega, params.k))

    return frame, controls, sensed


def run_scenario(config: SimConfig) -> TrajectoryLog:
    """
    Run one scenario from its initial conditions to t_max.

    Raises:
        ConfigError: if the configuration is invalid
        SimulationError: if two agents coincide, naming the step and pair
    """
    config.validate()
    swarm = initial_swarm(config)
    n_steps = config.n_steps
    logger.info(
        f"Running {config.mode} scenario: {config.n_agents} agents, "
        f"{n_steps} steps, seed {config.seed}"
    )

    times = [0.0]
    states = [tuple(swarm)]
    metrics = [dispersion(swarm, t=0.0)]
    differenced = config.noise.alpha_rate == Modes.ALPHA_RATE_DIFFERENCE
    previous: Optional[List[List[VisualSignal]]] = None

    for step in range(n_steps):
        try:
            frame, controls, sensed = _step_controls(config, swarm, step, previous)
        except CoincidentAgentsError as e:
            raise SimulationError(f"step {step}: agents {e.i} and {e.j} coincide") from e
        if differenced:
            previous = sensed

        swarm = euler_step(frame, controls, config.dt)
        t = (step + 1) * config.dt
        times.append(t)
        states.append(tuple(swarm))
        metrics.append(dispersion(swarm, t=t))

    logger.info(
        f"Scenario finished at t={times[-1]:g}: speed spread "
        f"{metrics[-1].speed_spread:.3g}, heading spread {metrics[-1].heading_spread:.3g}"
    )
    return TrajectoryLog(times=times, states=states, metrics=metrics)


_PARAM_AXES = {'H', 'k', 'L', 'L_e', 'beta', 'Gamma'}
_NOISE_AXES = {'sigma_q', 'sigma_a'}


def with_axis(base: SimConfig, axis: str, value: float) -> SimConfig:
    """
    Copy of ``base`` with one sweep axis set to ``value``.

    Sweeping L leaves an untied L_e untouched, so the feedback length keeps
    following L.

    Raises:
        ConfigError: if the axis is not sweepable
    """
    if axis in _PARAM_AXES:
        return replace(base, params=replace(base.params, **{axis: value}))
    if axis in _NOISE_AXES:
        return replace(base, noise=replace(base.noise, **{axis: value}))
    raise ConfigError(ValidationMessages.UNKNOWN_AXIS.format(
        axis=axis, supported=', '.join(Modes.SWEEP_AXES)
    ))


def run_sweep(
    base: SimConfig, axis: str, values: Sequence[float], jobs: int = 1
) -> List[TrajectoryLog]:
    """
    One run per value with everything else, seed included, held fixed.

    Runs are independent, so ``jobs > 1`` fans them out over worker
    processes; results come back in value order either way.
    """
    configs = [with_axis(base, axis, value) for value in values]
    logger.info(f"Sweeping {axis} over {len(configs)} values with {jobs} job(s)")

    if jobs <= 1 or len(configs) <= 1:
        return [run_scenario(config) for config in configs]

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_scenario, configs))
