"""
Visual signal synthesis.

Builds each agent's view of its neighbours (optic flow, subtended angle and
its rate, viewing angle) from ground-truth states, adds measurement noise
and applies the visibility and blind-sector masks.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..exceptions import CoincidentAgentsError, ConfigError
from ..utils.constants import Modes, SensingLimits, ValidationMessages
from .geometry import (
    AgentState, PairGeometry, SwarmParams, VisualSignal,
    pair_geometry, subtended_angle, subtended_rate, wrap_angle,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoiseParams:
    """Additive measurement noise on Qdot and alpha."""

    sigma_q: float = 0.0
    sigma_a: float = 0.0
    seed: int = 0
    alpha_rate: str = Modes.ALPHA_RATE_TRUTH

    @property
    def is_active(self) -> bool:
        return self.sigma_q > 0 or self.sigma_a > 0

    def validate(self) -> None:
        checks = [
            ('sigma_q', self.sigma_q >= 0, 'sigma_q >= 0'),
            ('sigma_a', self.sigma_a >= 0, 'sigma_a >= 0'),
            ('seed', 0 <= self.seed < 2 ** 64, '0 <= seed < 2**64'),
            ('alpha_rate', self.alpha_rate in Modes.ALPHA_RATE_MODES,
             f"alpha_rate in {Modes.ALPHA_RATE_MODES}"),
        ]
        for field, ok, constraint in checks:
            if not ok:
                raise ConfigError(ValidationMessages.CONSTRAINT.format(
                    field=field, constraint=constraint, value=getattr(self, field)
                ))


@dataclass(frozen=True)
class NoiseBoundInput:
    """Inputs of the optic-flow noise bound."""

    n_bar: float
    Gamma: float
    rho: float


def stream_rng(seed: int, step: int, agent: int) -> np.random.Generator:
    """
    Independent random stream for one agent at one timestep.

    The stream depends only on (seed, step, agent), so agents can be sensed
    in any order or in parallel and still draw the same deviates.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, step, agent]))


def optic_flow(si: AgentState, sj: AgentState, geom: PairGeometry) -> float:
    """
    Optic flow Qdot_ij induced on agent i by neighbour j.

    Qdot = -omega_i + (v_i sin(gamma_ij) - v_j sin(sightline_ji)) / r, which is
    the rate of change of j's bearing in i's image.
    """
    return -si.omega + (si.v * math.sin(geom.gamma_ij) - sj.v * math.sin(geom.sightline_ji)) / geom.r


def visibility(alpha: float, gamma: float, params: SwarmParams) -> bool:
    """
    Whether a neighbour can be resolved and is outside the blind sectors.

    Targets smaller than alpha_min are invisible (strict comparison). With
    Gamma > 0 the sectors |gamma| < Gamma (ahead) and |gamma| > pi - Gamma
    (behind) are ignored.
    """
    if alpha < params.alpha_min:
        return False
    if params.Gamma > 0:
        g = abs(wrap_angle(gamma))
        if g < params.Gamma or g > math.pi - params.Gamma:
            return False
    return True


def sense(
    swarm: Sequence[AgentState],
    i: int,
    params: SwarmParams,
    noise: NoiseParams,
    rng: Optional[np.random.Generator] = None,
    previous: Optional[Sequence[VisualSignal]] = None,
    dt: Optional[float] = None,
) -> List[VisualSignal]:
    """
    Visual signals of every neighbour of agent i, in neighbour index order.

    Args:
        swarm: frozen snapshot of all agent states
        i: index of the observing agent
        params: model constants (the true L sizes the targets)
        noise: noise levels; alpha and Qdot are perturbed, alpha_dot is not
            unless ``noise.alpha_rate`` asks for a differenced reading
        rng: random stream, required when noise is active
        previous: agent i's signals from the previous step, used by the
            differenced alpha_dot reading
        dt: timestep, required with ``previous``

    Returns:
        N - 1 signals, one per neighbour j != i

    Raises:
        CoincidentAgentsError: if agent i shares its position with a neighbour
    """
    si = swarm[i]
    noisy = noise.is_active
    if noisy and rng is None:
        raise ValueError("A random stream is required when measurement noise is active")
    differenced = (
        noise.alpha_rate == Modes.ALPHA_RATE_DIFFERENCE
        and previous is not None
        and dt is not None
    )

    lo = SensingLimits.ALPHA_MARGIN
    hi = math.pi / 2 - SensingLimits.ALPHA_MARGIN

    signals = []
    for j, sj in enumerate(swarm):
        if j == i:
            continue
        try:
            geom = pair_geometry(si, sj)
        except CoincidentAgentsError:
            raise CoincidentAgentsError(i, j)

        alpha = subtended_angle(geom.r, params.L)
        alpha_dot = subtended_rate(geom.r_dot, alpha, params.L)
        q_dot = optic_flow(si, sj, geom)

        if noisy:
            alpha = alpha + noise.sigma_a * rng.standard_normal()
            q_dot = q_dot + noise.sigma_q * rng.standard_normal()
            alpha = min(max(alpha, lo), hi)

        if differenced:
            alpha_dot = (alpha - previous[len(signals)].alpha) / dt

        signals.append(VisualSignal(
            gamma=geom.gamma_ij,
            alpha=alpha,
            alpha_dot=alpha_dot,
            q_dot=q_dot,
            visible=visibility(alpha, geom.gamma_ij, params),
        ))
    return signals


def noise_bound(inp: NoiseBoundInput) -> float:
    """
    Largest optic-flow noise for which the visually-guided laws stay convergent.

    q_bar = n_bar sin(Gamma) / rho. Gamma = 0 gives the degenerate bound 0.

    Raises:
        ConfigError: if an input violates its range
    """
    checks = [
        ('n_bar', inp.n_bar >= 0, 'n_bar >= 0'),
        ('Gamma', 0 <= inp.Gamma <= math.pi / 2, '0 <= Gamma <= pi/2'),
        ('rho', inp.rho > 0, 'rho > 0'),
    ]
    for field, ok, constraint in checks:
        if not ok:
            raise ConfigError(ValidationMessages.CONSTRAINT.format(
                field=field, constraint=constraint, value=getattr(inp, field)
            ))
    return inp.n_bar * math.sin(inp.Gamma) / inp.rho
