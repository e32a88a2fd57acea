"""
Post-processing of trajectory logs.

Dispersion metrics, sustained-convergence detection, equivalent damping
from the logarithmic decrement of successive peaks, and the planar
optic-flow profile seen by one agent.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import find_peaks

from ..exceptions import CoincidentAgentsError, GeometryError
from ..utils.constants import AnalysisConfig
from .geometry import TWO_PI, AgentState, SwarmParams, pair_geometry, subtended_angle, wrap_angle
from .sensing import optic_flow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DispersionRecord:
    """Worst-pair speed and heading disagreement at one time."""

    t: float
    speed_spread: float
    heading_spread: float


@dataclass(frozen=True)
class OscillationEstimate:
    """
    Equivalent linear damping extracted from successive peaks.

    ``pair_times[k]`` is the time of the first peak of the pair that produced
    ``zeta_seq[k]`` and ``omega_n_seq[k]``.
    """

    peak_times: Tuple[float, ...] = ()
    pair_times: Tuple[float, ...] = ()
    zeta_seq: Tuple[float, ...] = ()
    omega_n_seq: Tuple[float, ...] = ()

    @property
    def n_peaks(self) -> int:
        return len(self.peak_times)

    @property
    def is_empty(self) -> bool:
        return not self.zeta_seq


def _polar(state: AgentState) -> Tuple[float, float]:
    # negative speed is reverse travel
    if state.v < 0:
        return (-state.v, wrap_angle(state.theta + math.pi))
    return (state.v, state.theta)


def dispersion(states: Sequence[AgentState], t: float = 0.0) -> DispersionRecord:
    """Exact max over pairs of |v_i - v_j| and wrapped |theta_i - theta_j|."""
    polar = [_polar(s) for s in states]
    speed_spread = 0.0
    heading_spread = 0.0
    for a in range(len(polar)):
        va, ha = polar[a]
        for b in range(a + 1, len(polar)):
            vb, hb = polar[b]
            speed_spread = max(speed_spread, abs(va - vb))
            d = abs(wrap_angle(ha - hb))
            heading_spread = max(heading_spread, min(d, TWO_PI - d))
    return DispersionRecord(t=t, speed_spread=speed_spread, heading_spread=heading_spread)


def detect_convergence(
    series: Sequence[DispersionRecord], tol_frac: float = AnalysisConfig.CONVERGENCE_TOL_FRAC
) -> Optional[float]:
    """
    Earliest time after which both spreads stay below tol_frac of their
    initial values until the end of the log.

    A spread that starts at zero counts as converged while it stays zero.
    Returns None when the log never settles.
    """
    if not series:
        raise ValueError("Cannot detect convergence on an empty series")
    if not 0 < tol_frac < 1:
        raise ValueError(f"tol_frac must lie in (0, 1), got {tol_frac!r}")

    first = series[0]
    speed_tol = tol_frac * first.speed_spread
    heading_tol = tol_frac * first.heading_spread

    def settled(value: float, tol: float) -> bool:
        return value < tol or (tol == 0.0 and value == 0.0)

    converged_at = None
    for record in reversed(series):
        if not (settled(record.speed_spread, speed_tol)
                and settled(record.heading_spread, heading_tol)):
            break
        converged_at = record.t
    return converged_at


def _refine_peak(y: np.ndarray, p: int) -> Tuple[float, float]:
    """Three-point parabolic vertex around sample p: (offset in samples, height)."""
    y0, y1, y2 = y[p - 1], y[p], y[p + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return 0.0, float(y1)
    offset = 0.5 * (y0 - y2) / denom
    return float(offset), float(y1 - 0.25 * (y0 - y2) * offset)


def log_decrement(
    signal: Sequence[float], dt: float, asymptote: Optional[float] = None
) -> OscillationEstimate:
    """
    Equivalent damping ratio and natural frequency from successive peaks.

    Peaks are the local maxima of |signal - asymptote|. Successive maxima of
    the absolute deviation are half a period apart, so each pair gives
    delta = 2 ln(p_k / p_k+1), omega_d = pi / (t_k+1 - t_k),
    zeta = delta / sqrt(4 pi^2 + delta^2) and omega_n = omega_d / sqrt(1 - zeta^2).

    Args:
        signal: uniformly sampled scalar series
        dt: sample spacing in seconds
        asymptote: settled value; defaults to the mean of the last 10% of samples

    Returns:
        OscillationEstimate, empty when fewer than two peaks are found
    """
    x = np.asarray(signal, dtype=float)
    if x.size < 3:
        return OscillationEstimate()
    if asymptote is None:
        tail = max(1, int(round(x.size * AnalysisConfig.ASYMPTOTE_TAIL_FRACTION)))
        asymptote = float(np.mean(x[-tail:]))

    deviation = np.abs(x - asymptote)
    floor = AnalysisConfig.PEAK_FLOOR_FRAC * float(np.max(deviation))
    peaks, _ = find_peaks(deviation, height=floor if floor > 0 else None)
    if len(peaks) < 2:
        logger.debug(f"Only {len(peaks)} peak(s) found; no oscillation estimate")
        return OscillationEstimate(peak_times=tuple(float(p * dt) for p in peaks))

    refined = [_refine_peak(deviation, int(p)) for p in peaks]
    times = [(int(p) + offset) * dt for p, (offset, _) in zip(peaks, refined)]
    amplitudes = [height for _, height in refined]

    pair_times: List[float] = []
    zetas: List[float] = []
    omegas: List[float] = []
    for k in range(len(times) - 1):
        a0, a1 = amplitudes[k], amplitudes[k + 1]
        if a0 <= 0 or a1 <= 0:
            continue
        delta = 2.0 * math.log(a0 / a1)
        zeta = delta / math.sqrt(4.0 * math.pi ** 2 + delta ** 2)
        omega_d = math.pi / (times[k + 1] - times[k])
        pair_times.append(times[k])
        zetas.append(zeta)
        omegas.append(omega_d / math.sqrt(1.0 - zeta ** 2))

    return OscillationEstimate(
        peak_times=tuple(times),
        pair_times=tuple(pair_times),
        zeta_seq=tuple(zetas),
        omega_n_seq=tuple(omegas),
    )


def flow_profile(
    swarm: Sequence[AgentState],
    i: int,
    resolution: float = AnalysisConfig.FLOW_RESOLUTION,
    params: Optional[SwarmParams] = None,
) -> np.ndarray:
    """
    Optic-flow magnitude over agent i's field of view.

    Bins of width ``resolution`` tile [-pi, pi). A bin holds |Qdot| of the
    neighbour whose extent [gamma - alpha, gamma + alpha] covers the bin
    centre; where extents overlap the nearest neighbour wins. Uncovered bins
    hold 0. Visibility limits are not applied.

    Returns:
        array of shape (n_bins, 2): bearing of the bin centre, |Qdot|
    """
    if not resolution > 0:
        raise GeometryError(f"Resolution must be positive, got {resolution!r}")
    params = params or SwarmParams()

    n_bins = int(math.ceil(TWO_PI / resolution - 1e-9))
    centres = -math.pi + (np.arange(n_bins) + 0.5) * resolution
    magnitude = np.zeros(n_bins)
    nearest = np.full(n_bins, np.inf)

    si = swarm[i]
    for j, sj in enumerate(swarm):
        if j == i:
            continue
        try:
            geom = pair_geometry(si, sj)
        except CoincidentAgentsError:
            raise CoincidentAgentsError(i, j)
        alpha = subtended_angle(geom.r, params.L)
        offset = np.abs(np.mod(centres - geom.gamma_ij + math.pi, TWO_PI) - math.pi)
        covered = (offset <= alpha) & (geom.r < nearest)
        magnitude[covered] = abs(optic_flow(si, sj, geom))
        nearest[covered] = geom.r

    return np.column_stack([centres, magnitude])
