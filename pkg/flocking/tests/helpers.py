"""
Shared builders for flocking tests.
"""

import math
from typing import List

import numpy as np

from flocking.services.geometry import AgentState


def random_swarm(rng: np.random.Generator, n: int, box: float = 10.0,
                 min_spacing: float = 0.5, spin: float = 1.0) -> List[AgentState]:
    """Agents placed at least min_spacing apart with random speeds, headings and turn rates."""
    positions = []
    while len(positions) < n:
        x, y = rng.uniform(0.0, box, size=2)
        if all(math.hypot(x - px, y - py) >= min_spacing for px, py in positions):
            positions.append((float(x), float(y)))
    return [
        AgentState(
            x=px,
            y=py,
            v=float(rng.uniform(0.5, 2.0)),
            theta=float(rng.uniform(-math.pi, math.pi)),
            omega=float(rng.uniform(-spin, spin)),
        )
        for px, py in positions
    ]


def relative_error(actual: float, expected: float) -> float:
    return abs(actual - expected) / max(1.0, abs(expected))
