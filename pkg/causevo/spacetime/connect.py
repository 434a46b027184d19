import numpy as np
from numpy.typing import ArrayLike

from causevo.config import CONFIG
from causevo.curves.model import CausalCurve
from causevo.spacetime.model import Event, GridMismatchError, NotCausallyRelatedError, SpacetimeModel


def connecting_causal_curve(
    model: SpacetimeModel,
    p: Event,
    q: Event,
    time_grid: ArrayLike,
    slack: float = 0.0,
) -> CausalCurve:
    """
    The deterministic causal curve from p to q sampled on time_grid.

    Flat models and FLRW move affinely in (chart time, x); the cylinder turns along the
    shorter arc, antipodal ties in the positive direction. The first and last samples
    are p and q exactly.
    """
    model.validate_event(p)
    model.validate_event(q)
    if not model.causally_precedes(p, q, slack=slack):
        raise NotCausallyRelatedError(f"{p} does not causally precede {q} on {model.kind.value}")

    grid = np.array(time_grid, dtype=float).reshape(-1)
    if grid.size == 0:
        raise GridMismatchError("Empty time grid")
    tol = CONFIG.GRID_TOL
    if abs(grid[0] - p.t) > tol * max(1.0, abs(p.t)) or abs(grid[-1] - q.t) > tol * max(1.0, abs(q.t)):
        raise GridMismatchError(
            f"Grid [{grid[0]}, {grid[-1]}] does not start at T(p)={p.t} and end at T(q)={q.t}"
        )

    if grid.size == 1:
        if p != q:
            raise GridMismatchError(f"One-point grid cannot join distinct events {p} and {q}")
        return CausalCurve(np.array([p.t]), np.array([[p.t, p.x]]))

    grid[0], grid[-1] = p.t, q.t
    return CausalCurve(grid, model.connecting_points(p, q, grid))
