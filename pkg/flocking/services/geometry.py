"""
Domain types, angle arithmetic and pairwise geometry.

Everything here is a pure function over immutable value types, so any of it
can be called from concurrent contexts.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from ..exceptions import CoincidentAgentsError, ConfigError, GeometryError
from ..utils.constants import FeedbackDefaults, ValidationMessages

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AgentState:
    """Kinematic state of one no-sideslip agent."""

    x: float
    y: float
    v: float
    theta: float
    omega: float = 0.0

    @property
    def velocity(self) -> Tuple[float, float]:
        """Inertial velocity vector (v cos theta, v sin theta)."""
        return (self.v * math.cos(self.theta), self.v * math.sin(self.theta))


@dataclass(frozen=True)
class SwarmParams:
    """
    Feedback and model constants.

    ``L_e`` left as ``None`` ties the feedback length to the true length ``L``.
    ``sigma`` is the kernel offset of the Cucker-Smale oracle.
    """

    H: float = FeedbackDefaults.H
    k: float = FeedbackDefaults.K
    beta: float = FeedbackDefaults.BETA
    L: float = FeedbackDefaults.L
    L_e: Optional[float] = None
    alpha_min: float = FeedbackDefaults.ALPHA_MIN
    Gamma: float = FeedbackDefaults.GAMMA
    v_floor: float = FeedbackDefaults.V_FLOOR
    sigma: float = FeedbackDefaults.SIGMA

    @property
    def feedback_length(self) -> float:
        """Semi-length the feedback laws assume."""
        return self.L if self.L_e is None else self.L_e

    def validate(self) -> None:
        """
        Check the parameter invariants.

        Raises:
            ConfigError: naming the first field that violates its constraint
        """
        checks = [
            ('H', self.H > 0, 'H > 0'),
            ('k', self.k > 0, 'k > 0'),
            ('beta', math.isfinite(self.beta), 'finite beta'),
            ('L', self.L > 0, 'L > 0'),
            ('L_e', self.L_e is None or self.L_e > 0, 'L_e > 0'),
            ('alpha_min', self.alpha_min >= 0, 'alpha_min >= 0'),
            ('Gamma', 0 <= self.Gamma < math.pi / 2, '0 <= Gamma < pi/2'),
            ('v_floor', self.v_floor > 0, 'v_floor > 0'),
            ('sigma', self.sigma > 0, 'sigma > 0'),
        ]
        for field, ok, constraint in checks:
            if not ok:
                raise ConfigError(ValidationMessages.CONSTRAINT.format(
                    field=field, constraint=constraint, value=getattr(self, field)
                ))


@dataclass(frozen=True)
class PairGeometry:
    """Relative geometry of agent j as seen by agent i."""

    r: float
    r_dot: float
    gamma_ij: float
    gamma_ji: float

    @property
    def sightline_ji(self) -> float:
        """
        Angle of the i-to-j sight line in j's body frame.

        The optic-flow and relative-velocity relations measure j's heading
        against the sight line from i, which points opposite to the bearing
        of i from j.
        """
        return wrap_angle(self.gamma_ji + math.pi)


@dataclass(frozen=True)
class VisualSignal:
    """One neighbour's sensed quantities, as seen by one agent."""

    gamma: float
    alpha: float
    alpha_dot: float
    q_dot: float
    visible: bool = True


def wrap_angle(a: float) -> float:
    """
    Wrap an angle onto [-pi, pi).

    Values already inside the interval come back unchanged, which keeps the
    operation exactly idempotent. pi itself maps to -pi.

    Raises:
        GeometryError: if the angle is not finite
    """
    if not math.isfinite(a):
        raise GeometryError(f"Cannot wrap non-finite angle {a!r}")
    if -math.pi <= a < math.pi:
        return a
    wrapped = (a + math.pi) % TWO_PI - math.pi
    # float modulo can land exactly on the divisor
    if wrapped >= math.pi:
        wrapped -= TWO_PI
    return wrapped


def pair_geometry(si: AgentState, sj: AgentState) -> PairGeometry:
    """
    Distance, distance rate and mutual viewing angles of a pair.

    Args:
        si: observing agent
        sj: observed agent

    Returns:
        PairGeometry with both bearings wrapped to [-pi, pi)

    Raises:
        CoincidentAgentsError: if the two positions are equal
    """
    dx = sj.x - si.x
    dy = sj.y - si.y
    r = math.hypot(dx, dy)
    if r == 0.0:
        raise CoincidentAgentsError()

    vix, viy = si.velocity
    vjx, vjy = sj.velocity
    r_dot = (dx * (vjx - vix) + dy * (vjy - viy)) / r

    return PairGeometry(
        r=r,
        r_dot=r_dot,
        gamma_ij=wrap_angle(math.atan2(dy, dx) - si.theta),
        gamma_ji=wrap_angle(math.atan2(-dy, -dx) - sj.theta),
    )


def subtended_angle(r: float, L: float) -> float:
    """
    Half-angle subtended by a body of semi-length L at distance r.

    Chosen so that cot(alpha) = r / L.
    """
    if not r > 0:
        raise GeometryError(f"Distance must be positive, got {r!r}")
    if not L > 0:
        raise GeometryError(f"Semi-length must be positive, got {L!r}")
    return math.atan(L / r)


def subtended_rate(r_dot: float, alpha: float, L: float) -> float:
    """Expansion rate alpha_dot from the distance rate, inverting r = L cot(alpha)."""
    cot = 1.0 / math.tan(alpha)
    return -r_dot / (L * (1.0 + cot * cot))


def reflect_to_inertial(phi: float, vt: float, vn: float) -> Tuple[float, float]:
    """
    Map sight-line frame components (tangential, normal) to inertial x/y.

    The transform [[cos phi, sin phi], [sin phi, -cos phi]] is a reflection,
    so it is its own inverse.
    """
    c = math.cos(phi)
    s = math.sin(phi)
    return (c * vt + s * vn, s * vt - c * vn)
