"""Seeded sample points inside a chart domain."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SamplePlan:
    points: list
    h: float = 1e-4
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("finite-difference step must be positive")


def sample_points(coords, count, seed, box=(-2.0, 2.0), positive=(), positive_box=(0.25, 3.0)):
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        pts.append([float(rng.uniform(*positive_box)) if c in positive else float(rng.uniform(*box))
                    for c in coords])
    return pts
