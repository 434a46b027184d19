from typing import List, Optional

import numpy as np
from numpy.typing import ArrayLike

from causevo.curves.model import CausalCurve
from causevo.spacetime.model import TWO_PI, SpacetimeKind, SpacetimeModel


def random_causal_curve(
    model: SpacetimeModel,
    rng: np.random.Generator,
    times: ArrayLike,
    max_speed: float = 0.9,
    x0: Optional[float] = None,
    quantum: Optional[float] = None,
) -> CausalCurve:
    """
    A random canonically parametrized causal curve on the given grid.

    Each step moves at most max_speed times the chart-time step. With a quantum the
    spatial steps are integer multiples of it, which keeps coordinates exactly
    representable when the grid and x0 are dyadic.
    """
    if not 0.0 <= max_speed <= 1.0:
        raise ValueError(f"max_speed must lie in [0, 1], got {max_speed}")
    times = np.asarray(times, dtype=float)
    if x0 is None:
        x0 = rng.uniform(0.0, TWO_PI) if model.kind is SpacetimeKind.CYLINDER else rng.uniform(-1.0, 1.0)

    reach = max_speed * np.diff(np.asarray(model.chart_time(times), dtype=float))
    if quantum:
        limits = np.floor(reach / quantum).astype(int)
        steps = np.array([rng.integers(-m, m + 1) for m in limits], dtype=float) * quantum
    else:
        steps = rng.uniform(-1.0, 1.0, size=reach.shape) * reach

    xs = x0 + np.concatenate([[0.0], np.cumsum(steps)])
    return CausalCurve.from_path(times, model.normalize_x(xs))


def random_curve_family(
    model: SpacetimeModel,
    rng: np.random.Generator,
    count: int,
    times: ArrayLike,
    max_speed: float = 0.9,
) -> List[CausalCurve]:
    return [random_causal_curve(model, rng, times, max_speed=max_speed) for _ in range(count)]


def random_grid(rng: np.random.Generator, start: float, stop: float, size: int) -> np.ndarray:
    """Sorted grid with both endpoints and size - 2 random interior times."""
    if size < 2:
        raise ValueError("A grid needs at least two points")
    interior = np.sort(rng.uniform(start, stop, size=size - 2))
    grid = np.unique(np.concatenate([[start], interior, [stop]]))
    if grid.size < size:
        return np.linspace(start, stop, size)
    return grid


def perturbed_sequence(
    base: CausalCurve,
    shape: ArrayLike,
    amplitude: float,
    count: int,
) -> List[CausalCurve]:
    """gamma_n = base + (amplitude / n) * shape for n = 1..count, in the spatial coordinate."""
    shape = np.asarray(shape, dtype=float)
    return [
        CausalCurve.from_path(base.times, base.xs + (amplitude / n) * shape)
        for n in range(1, count + 1)
    ]
