"""
Control laws: the perfect-information Cucker-Smale baseline and the
visually-guided (YFM) speed and heading laws.

All functions read a frozen snapshot and return new values; controls for
every agent at one timestep can be computed in any order.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from ..exceptions import CoincidentAgentsError, GeometryError
from ..utils.constants import FeedbackDefaults
from .geometry import AgentState, SwarmParams, VisualSignal, reflect_to_inertial, wrap_angle

logger = logging.getLogger(__name__)

Vector = Tuple[float, float]


@dataclass(frozen=True)
class ControlInput:
    """Speed-rate and turn-acceleration commands for one agent."""

    u_v: float
    u_omega: float


@dataclass(frozen=True)
class DesiredRates:
    """Desired speed rate and heading rate."""

    v_dot_star: float
    theta_dot_star: float


def guard_speed(v: float, v_floor: float) -> float:
    """Signed speed kept at least v_floor away from zero, for 1/v terms."""
    return math.copysign(max(abs(v), v_floor), v)


def cs_acceleration(
    swarm: Sequence[AgentState], i: int, H: float, beta: float, sigma: float = 1.0
) -> Vector:
    """
    Cucker-Smale velocity rate of agent i.

    Sum over j != i of H (v_j - v_i) / (sigma^2 + r_ij^2)^beta.

    Raises:
        CoincidentAgentsError: if agent i shares its position with a neighbour
    """
    si = swarm[i]
    vix, viy = si.velocity
    sigma_sq = sigma * sigma
    ax = 0.0
    ay = 0.0
    for j, sj in enumerate(swarm):
        if j == i:
            continue
        dx = sj.x - si.x
        dy = sj.y - si.y
        r_sq = dx * dx + dy * dy
        if r_sq == 0.0:
            raise CoincidentAgentsError(i, j)
        vjx, vjy = sj.velocity
        weight = H / (sigma_sq + r_sq) ** beta
        ax += weight * (vjx - vix)
        ay += weight * (vjy - viy)
    return (ax, ay)


def rates_from_vector(
    v: float, theta: float, a: Vector, v_floor: float = FeedbackDefaults.V_FLOOR
) -> DesiredRates:
    """
    Speed and heading rates that realise a velocity-rate vector.

    Uses theta_dot* = (v_x a_y - v_y a_x) / v^2, which equals the
    1/(1 + tan^2 theta) form without its singularity at theta = +-pi/2.

    Raises:
        GeometryError: if |v| is below v_floor
    """
    if abs(v) < v_floor:
        raise GeometryError(f"Speed {v!r} is below the floor {v_floor!r}")
    vx = v * math.cos(theta)
    vy = v * math.sin(theta)
    ax, ay = a
    return DesiredRates(
        v_dot_star=(vx * ax + vy * ay) / v,
        theta_dot_star=(vx * ay - vy * ax) / (v * v),
    )


def sign_select(theta_i: float, gamma_ij: float) -> int:
    """
    Sign rule: -1 when |theta_i + gamma_ij| lies in [0, pi/2], else +1.

    The boundary belongs to the minus branch.
    """
    return -1 if abs(wrap_angle(theta_i + gamma_ij)) <= math.pi / 2 else 1


def relative_velocity_estimate(
    signal: VisualSignal, theta_i: float, omega_i: float, L_e: float
) -> Vector:
    """
    Inertial relative velocity v_j - v_i rebuilt from one visual signal.

    The sign rule orients the tangent axis of the sight-line frame: minus
    keeps it pointing at the neighbour, plus reverses it. Both frame
    components carry the sign, then the reflection maps them to x/y. With a
    wrong L_e the result is scaled by L_e / L.
    """
    sign = sign_select(theta_i, signal.gamma)
    phi = wrap_angle(theta_i + signal.gamma)
    if sign > 0:
        phi = wrap_angle(phi + math.pi)

    cot = 1.0 / math.tan(signal.alpha)
    tangential = sign * (1.0 + cot * cot) * L_e * signal.alpha_dot
    normal = sign * L_e * cot * (signal.q_dot + omega_i)
    return reflect_to_inertial(phi, tangential, normal)


def _visual_acceleration(
    signals: Sequence[VisualSignal], theta_i: float, omega_i: float, params: SwarmParams
) -> Vector:
    L_e = params.feedback_length
    ax = 0.0
    ay = 0.0
    for signal in signals:
        if not signal.visible:
            continue
        cot = 1.0 / math.tan(signal.alpha)
        weight = params.H / (1.0 + L_e * L_e * cot * cot) ** params.beta
        dvx, dvy = relative_velocity_estimate(signal, theta_i, omega_i, L_e)
        ax += weight * dvx
        ay += weight * dvy
    return (ax, ay)


def yfm_desired_rates(
    signals: Sequence[VisualSignal],
    v_i: float,
    omega_i: float,
    theta_i: float,
    params: SwarmParams,
) -> DesiredRates:
    """
    Desired speed and heading rates from visual signals alone.

    Equivalent to the closed forms
        v_dot*     = H L_e sum [-alpha_dot (1 + cot^2) cos g - (Qdot + omega) cot sin g] / (1 + L_e^2 cot^2)^beta
        theta_dot* = H L_e / v sum [-alpha_dot (1 + cot^2) sin g + (Qdot + omega) cot cos g] / (1 + L_e^2 cot^2)^beta
    where the sign of the alpha_dot terms has already absorbed the frame
    orientation chosen by ``sign_select``. Invisible signals contribute zero.
    """
    ax, ay = _visual_acceleration(signals, theta_i, omega_i, params)
    c = math.cos(theta_i)
    s = math.sin(theta_i)
    return DesiredRates(
        v_dot_star=c * ax + s * ay,
        theta_dot_star=(c * ay - s * ax) / guard_speed(v_i, params.v_floor),
    )


def yfm_speed_control(
    signals: Sequence[VisualSignal], omega_i: float, theta_i: float, params: SwarmParams
) -> float:
    """Speed law: u_v = v_dot*."""
    ax, ay = _visual_acceleration(signals, theta_i, omega_i, params)
    return math.cos(theta_i) * ax + math.sin(theta_i) * ay


def yfm_heading_control(
    signals: Sequence[VisualSignal],
    v_i: float,
    omega_i: float,
    theta_i: float,
    params: SwarmParams,
) -> float:
    """Heading law: u_omega = -k (omega_i - theta_dot*)."""
    rates = yfm_desired_rates(signals, v_i, omega_i, theta_i, params)
    return -params.k * (omega_i - rates.theta_dot_star)


def cs_desired_rates(swarm: Sequence[AgentState], i: int, params: SwarmParams) -> DesiredRates:
    """Desired rates of agent i under perfect information (Cucker-Smale oracle)."""
    si = swarm[i]
    a = cs_acceleration(swarm, i, params.H, params.beta, params.sigma)
    return rates_from_vector(guard_speed(si.v, params.v_floor), si.theta, a, params.v_floor)


def control_from_rates(rates: DesiredRates, omega_i: float, k: float) -> ControlInput:
    """Speed command follows v_dot*; the turn loop drives omega toward theta_dot*."""
    return ControlInput(u_v=rates.v_dot_star, u_omega=-k * (omega_i - rates.theta_dot_star))


def size_mismatch_oracle(H: float, beta: float, L: float, L_e: float) -> Tuple[float, float]:
    """
    Cucker-Smale coupling and kernel offset reproduced by laws that assume L_e.

    Returns (H', sigma) with sigma = L / L_e and H' = H (L_e / L)^(1 - 2 beta),
    so that H' / (sigma^2 + r^2)^beta = (L_e / L) H / (1 + (L_e / L)^2 r^2)^beta.
    """
    ratio = L_e / L
    return (H * ratio ** (1.0 - 2.0 * beta), 1.0 / ratio)
