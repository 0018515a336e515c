"""Evaluation grids shared by the membership and dominance checkers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_MIN = 1e-6
DEFAULT_MAX = 1e6
DEFAULT_POINTS = 200


@dataclass(frozen=True)
class Grid:
    min: float = DEFAULT_MIN
    max: float = DEFAULT_MAX
    points: int = DEFAULT_POINTS
    scale: str = "log"

    def __post_init__(self):
        if not (0 < self.min < self.max):
            raise ValueError(f"grid needs 0 < min < max, got [{self.min}, {self.max}]")
        if self.points < 2:
            raise ValueError("grid needs at least two points")
        if self.scale not in ("log", "linear"):
            raise ValueError(f"unknown grid scale {self.scale!r}")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)

    def to_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "points": self.points, "scale": self.scale}


def as_grid(grid) -> Grid:
    if grid is None:
        return Grid()
    if isinstance(grid, Grid):
        return grid
    if isinstance(grid, dict):
        return Grid(**grid)
    raise TypeError(f"cannot interpret {grid!r} as a Grid")
