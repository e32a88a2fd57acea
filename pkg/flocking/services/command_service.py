"""
Command orchestration for the flock entry point.

Resolves the scenario, runs the requested verb, writes its CSV outputs and
records the invocation in the run registry.
"""

import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional

import numpy as np
from django.conf import settings
from django.utils import timezone

from ..exceptions import ConfigError
from ..models import RunLog, SimulationRun
from ..utils.constants import (
    AnalysisConfig, Modes, StatusMessages, ValidationMessages,
)
from ..utils.csv_writers import CsvWriter, column, read_trajectory_rows
from .analysis import OscillationEstimate, detect_convergence, flow_profile, log_decrement
from .config_service import load_config, parse_config
from .sensing import NoiseBoundInput, noise_bound
from .simulation import SimConfig, TrajectoryLog, initial_swarm, run_scenario, run_sweep

logger = logging.getLogger(__name__)

STATE_FIELDS = ['x', 'y', 'v', 'theta', 'omega']


@dataclass
class CliCommand:
    """One parsed invocation of the flock command."""

    verb: str
    config_path: Optional[str] = None
    output_dir: Optional[str] = None
    overrides: List[str] = field(default_factory=list)
    jobs: Optional[int] = None
    seed: Optional[int] = None
    # sweep
    axis: Optional[str] = None
    values: List[float] = field(default_factory=list)
    # analyze / flowfield
    log_path: Optional[str] = None
    agent: int = AnalysisConfig.OSCILLATION_AGENT
    field_name: str = AnalysisConfig.OSCILLATION_FIELD
    asymptote: Optional[float] = None
    resolution: float = AnalysisConfig.FLOW_RESOLUTION
    time: Optional[float] = None
    # noisebound
    n_bar: Optional[float] = None
    gamma: Optional[float] = None
    rho: Optional[float] = None

    def validate(self) -> None:
        if self.verb not in Modes.VERBS:
            raise ConfigError(ValidationMessages.UNKNOWN_VERB.format(
                verb=self.verb, supported=', '.join(Modes.VERBS)
            ))
        if self.config_path is not None and not Path(self.config_path).is_file():
            raise ConfigError(ValidationMessages.MISSING_CONFIG.format(path=self.config_path))
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise ConfigError(ValidationMessages.CONSTRAINT.format(
                field='seed', constraint='0 <= seed < 2**64', value=self.seed
            ))


@dataclass
class CommandResult:
    """Exit status, registry row and files written by one command."""

    status: int
    run: SimulationRun
    outputs: List[Path] = field(default_factory=list)
    message: str = ''


def oscillation_of(signal: np.ndarray, dt: float, field_name: str,
                   asymptote: Optional[float] = None) -> OscillationEstimate:
    """Log-decrement estimate of one state series; headings are unwrapped first."""
    if field_name == 'theta':
        signal = np.unwrap(signal)
    return log_decrement(signal, dt, asymptote=asymptote)


class CommandService:
    """Runs flock verbs and records them."""

    def __init__(self, stdout=None):
        """
        Initialize the command service.

        Args:
            stdout: stream for printed results (noisebound); defaults to sys.stdout
        """
        self.stdout = stdout or sys.stdout

    def execute(self, cmd: CliCommand) -> CommandResult:
        """
        Execute one command.

        The registry row is created before any work starts and is marked
        completed or failed at the end. Errors propagate to the caller after
        the row is updated.
        """
        cmd.validate()
        run = SimulationRun.objects.create(
            verb=cmd.verb,
            status='running',
            overrides=list(cmd.overrides),
            seed='' if cmd.seed is None else str(cmd.seed),
        )
        self._log(run, 'start', StatusMessages.RUN_STARTED)

        try:
            if cmd.verb == 'run':
                result = self._run(cmd, run)
            elif cmd.verb == 'sweep':
                result = self._sweep(cmd, run)
            elif cmd.verb == 'analyze':
                result = self._analyze(cmd, run)
            elif cmd.verb == 'flowfield':
                result = self._flowfield(cmd, run)
            else:
                result = self._noisebound(cmd, run)

            run.status = 'completed'
            run.completed_at = timezone.now()
            run.save()
            self._log(run, 'finish', StatusMessages.RUN_COMPLETED)
            logger.info(f"{cmd.verb} completed; outputs: {[str(p) for p in result.outputs]}")
            return result

        except Exception as e:
            logger.error(f"{cmd.verb} failed: {e}", exc_info=True)
            run.status = 'failed'
            run.error_message = str(e)
            run.completed_at = timezone.now()
            run.save()
            self._log(run, 'finish', StatusMessages.RUN_FAILED.format(error_message=str(e)), 'error')
            raise

    def _config(self, cmd: CliCommand, run: SimulationRun) -> SimConfig:
        overrides = list(cmd.overrides)
        if cmd.seed is not None:
            overrides.append(f"seed={cmd.seed}")
        if cmd.config_path is None:
            config, text = parse_config('', overrides), ''
        else:
            config, text = load_config(cmd.config_path, overrides)
        run.config_text = text
        run.seed = str(config.seed)
        run.save()
        self._log(run, 'config', f"{config.mode} scenario, {config.n_agents} agents, seed {config.seed}")
        return config

    def _output_dir(self, cmd: CliCommand, run: SimulationRun) -> Path:
        out = Path(cmd.output_dir or settings.FLOCK_OUTPUT_DIR)
        out.mkdir(parents=True, exist_ok=True)
        run.output_dir = str(out)
        run.save()
        return out

    def _write_run(self, directory: Path, log: TrajectoryLog) -> List[Path]:
        return [CsvWriter.write_trajectory(directory, log), CsvWriter.write_metrics(directory, log)]

    def _run(self, cmd: CliCommand, run: SimulationRun) -> CommandResult:
        config = self._config(cmd, run)
        out = self._output_dir(cmd, run)
        log = run_scenario(config)
        outputs = self._write_run(out, log)

        final = log.metrics[-1]
        run.summary = {
            'steps': len(log.times) - 1,
            'final_speed_spread': final.speed_spread,
            'final_heading_spread': final.heading_spread,
            'conv_time': detect_convergence(log.metrics),
        }
        self._log(run, 'run', f"Wrote {len(outputs)} files to {out}")
        return CommandResult(status=0, run=run, outputs=outputs)

    def _sweep(self, cmd: CliCommand, run: SimulationRun) -> CommandResult:
        if cmd.axis not in Modes.SWEEP_AXES:
            raise ConfigError(ValidationMessages.UNKNOWN_AXIS.format(
                axis=cmd.axis, supported=', '.join(Modes.SWEEP_AXES)
            ))
        if not cmd.values:
            raise ConfigError("A sweep needs at least one value (--values)")

        config = self._config(cmd, run)
        out = self._output_dir(cmd, run)
        jobs = cmd.jobs or settings.FLOCK_SWEEP_JOBS
        logs = run_sweep(config, cmd.axis, cmd.values, jobs=jobs)

        outputs: List[Path] = []
        summary_rows = []
        for index, (value, log) in enumerate(zip(cmd.values, logs)):
            run_dir = out / f"{index:02d}_{cmd.axis}_{value:g}"
            outputs.extend(self._write_run(run_dir, log))

            final = log.metrics[-1]
            heading = log.series(AnalysisConfig.OSCILLATION_AGENT, 'theta')
            estimate = oscillation_of(heading, config.dt, 'theta')
            summary_rows.append((
                float(value),
                detect_convergence(log.metrics),
                final.speed_spread,
                final.heading_spread,
                estimate.n_peaks,
            ))
            self._log(run, 'sweep', f"{cmd.axis}={value:g} done")

        outputs.append(CsvWriter.write_sweep_summary(out, summary_rows))
        run.summary = {
            'axis': cmd.axis,
            'values': [float(v) for v in cmd.values],
            'conv_times': [row[1] for row in summary_rows],
        }
        return CommandResult(status=0, run=run, outputs=outputs)

    def _analyze(self, cmd: CliCommand, run: SimulationRun) -> CommandResult:
        if cmd.field_name not in STATE_FIELDS:
            raise ConfigError(ValidationMessages.INVALID_VALUE.format(
                key='field', expected=f"one of {STATE_FIELDS}", value=cmd.field_name
            ))

        if cmd.log_path is not None:
            try:
                rows = read_trajectory_rows(Path(cmd.log_path))
            except (OSError, ValueError) as e:
                raise ConfigError(f"Cannot read trajectory {cmd.log_path}: {e}") from e
            signal = column(rows, cmd.agent, cmd.field_name)
            times = column(rows, cmd.agent, 't')
            if signal is None:
                raise ConfigError(f"Agent {cmd.agent} is not in {cmd.log_path}")
            dt = float(times[1] - times[0]) if len(times) > 1 else 1.0
            self._log(run, 'analyze', f"Read {len(signal)} samples from {cmd.log_path}")
        else:
            config = self._config(cmd, run)
            if not 0 <= cmd.agent < config.n_agents:
                raise ConfigError(f"Agent {cmd.agent} is out of range for {config.n_agents} agents")
            log = run_scenario(config)
            signal = log.series(cmd.agent, cmd.field_name)
            dt = config.dt

        out = self._output_dir(cmd, run)
        estimate = oscillation_of(signal, dt, cmd.field_name, cmd.asymptote)
        if estimate.is_empty:
            logger.warning(f"No oscillation found in agent {cmd.agent} {cmd.field_name}")
            self._log(run, 'analyze', "Fewer than two peaks; oscillation table is empty", 'warning')

        outputs = [CsvWriter.write_oscillation(out, estimate)]
        run.summary = {
            'n_peaks': estimate.n_peaks,
            'zeta': list(estimate.zeta_seq),
            'omega_n': list(estimate.omega_n_seq),
        }
        return CommandResult(status=0, run=run, outputs=outputs)

    def _flowfield(self, cmd: CliCommand, run: SimulationRun) -> CommandResult:
        config = self._config(cmd, run)
        if not 0 <= cmd.agent < config.n_agents:
            raise ConfigError(f"Agent {cmd.agent} is out of range for {config.n_agents} agents")

        if cmd.time:
            swarm = list(run_scenario(replace(config, t_max=cmd.time)).states[-1])
        else:
            config.validate()
            swarm = initial_swarm(config)

        out = self._output_dir(cmd, run)
        profile = flow_profile(swarm, cmd.agent, cmd.resolution, config.params)
        outputs = [CsvWriter.write_profile(out, profile)]
        run.summary = {
            'bins': int(profile.shape[0]),
            'covered_bins': int(np.count_nonzero(profile[:, 1])),
        }
        return CommandResult(status=0, run=run, outputs=outputs)

    def _noisebound(self, cmd: CliCommand, run: SimulationRun) -> CommandResult:
        missing = [name for name in ('n_bar', 'gamma', 'rho') if getattr(cmd, name) is None]
        if missing:
            raise ConfigError(f"noisebound needs {', '.join('--' + m.replace('_', '-') for m in missing)}")

        q_bar = noise_bound(NoiseBoundInput(n_bar=cmd.n_bar, Gamma=cmd.gamma, rho=cmd.rho))
        message = f"{q_bar:#.6g}"
        self.stdout.write(message + '\n')
        run.summary = {'q_bar': q_bar}
        return CommandResult(status=0, run=run, message=message)

    def _log(self, run: SimulationRun, step: str, message: str, level: str = 'info') -> None:
        """Log a run step in the registry."""
        RunLog.objects.create(run=run, step=step, message=message, level=level)
