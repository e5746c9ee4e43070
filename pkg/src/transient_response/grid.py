"""Uniform time grids."""
import numpy as np

from .errors import InvalidGrid

MAX_POINTS = 10_000_000


def make_grid(t_end, dt):
    """Uniform grid 0, dt, 2 dt, ... reaching ``t_end`` (rounded to whole steps)."""
    if not dt > 0:
        raise InvalidGrid(f"dt must be positive, got {dt}")
    if not t_end > 0:
        raise InvalidGrid(f"t_end must be positive, got {t_end}")
    n = int(round(t_end / dt)) + 1
    if n > MAX_POINTS:
        raise InvalidGrid(f"grid of {n} points exceeds the cap of {MAX_POINTS}")
    return np.arange(n) * dt


def check_grid(grid):
    """Validate a uniform grid starting at 0 and return ``(grid, dt)``.

    A single-point grid ``[0]`` is allowed; its step is reported as 0.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidGrid("grid must be a non-empty 1-D array")
    if grid[0] != 0.0:
        raise InvalidGrid("grid must start at 0")
    if grid.size == 1:
        return grid, 0.0
    dt = (grid[-1] - grid[0]) / (grid.size - 1)
    if not dt > 0:
        raise InvalidGrid("grid must be strictly increasing")
    steps = np.diff(grid)
    if np.any(steps <= 0) or np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1.0):
        raise InvalidGrid("grid must be uniform and strictly increasing")
    return grid, float(dt)
