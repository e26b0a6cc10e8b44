"""Time-step schedules shared by every integration path.

The step tables are the single source of truth for stage times: both
kernel backends consume the same arrays, so a sweep row, a singleton
diagnostic call, and a recorded trajectory all march through bit-identical
time grids.
"""

import numpy as np

# Default number of steps when a caller does not pin the step size.
DEFAULT_STEPS = 5000


def default_step(t_start: float, t_end: float) -> float:
    return abs(t_end - t_start) / DEFAULT_STEPS


def build_time_grid(t_start: float, t_end: float, h: float) -> np.ndarray:
    """Return the sample times t_start .. t_end for a fixed step h.

    The final step is shortened so the grid lands exactly on t_end.
    Raises ValueError when h is non-positive or exceeds the window length.
    """
    if not np.isfinite(t_start) or not np.isfinite(t_end):
        raise ValueError("time window must be finite")
    total = t_end - t_start
    if total == 0.0:
        raise ValueError("time window must have nonzero length")
    if not (h > 0.0):
        raise ValueError(f"step must be positive, got {h}")
    if h > abs(total):
        raise ValueError(f"step {h} exceeds window length {abs(total)}")
    n = max(1, int(np.ceil(abs(total) / h - 1e-12)))
    ts = t_start + np.copysign(h, total) * np.arange(n + 1, dtype=np.float64)
    ts[n] = t_end
    return ts


def sin_tables(ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """sin(t) at the step endpoints and midpoints of a time grid.

    Precomputed once so both backends see identical forcing values.
    """
    hs = np.diff(ts)
    return np.sin(ts), np.sin(ts[:-1] + hs / 2.0)
