"""Small statistics helpers shared by the Monte-Carlo experiments."""

from __future__ import annotations

import math

__all__ = ["wilson_interval", "Z_95", "Z_99"]

Z_95 = 1.959963984540054
Z_99 = 2.5758293035489004


def wilson_interval(hits: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval (lo, hi) for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= hits <= trials:
        raise ValueError("hits must lie in [0, trials]")
    p = hits / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, centre - half), min(1.0, centre + half)
