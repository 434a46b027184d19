from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from causevo.curves.generators import random_causal_curve
from causevo.measures.model import Evolution, SliceMeasure
from causevo.spacetime.model import Event, SpacetimeModel
from causevo.utils.numerics import Weight


def random_weights(rng: np.random.Generator, count: int, rational: bool = True, max_units: int = 6) -> List[Weight]:
    units = rng.integers(1, max_units + 1, size=count)
    total = int(units.sum())
    if rational:
        return [Fraction(int(u), total) for u in units]
    return [float(u) / total for u in units]


def random_slice_measure(
    rng: np.random.Generator,
    time: float,
    n_atoms: int,
    x_range: Tuple[float, float] = (-2.0, 2.0),
    quantum: float = 0.25,
    rational: bool = True,
) -> SliceMeasure:
    """Atoms at distinct multiples of quantum inside x_range with random positive weights."""
    lo, hi = int(np.ceil(x_range[0] / quantum)), int(np.floor(x_range[1] / quantum))
    slots = rng.choice(np.arange(lo, hi + 1), size=n_atoms, replace=False)
    events = [Event(float(time), float(s) * quantum) for s in sorted(slots)]
    return SliceMeasure.from_atoms(time, zip(events, random_weights(rng, n_atoms, rational)))


def random_measure_pair(
    rng: np.random.Generator,
    max_atoms: int = 6,
    dt: float = 1.0,
    x_range: Tuple[float, float] = (-2.0, 2.0),
    rational: bool = True,
) -> Tuple[SliceMeasure, SliceMeasure]:
    """Two random slice measures at times 0 and dt, a mix of causally related and not."""
    n = int(rng.integers(1, max_atoms + 1))
    m = int(rng.integers(1, max_atoms + 1))
    return (
        random_slice_measure(rng, 0.0, n, x_range, rational=rational),
        random_slice_measure(rng, dt, m, x_range, rational=rational),
    )


def random_causal_evolution(
    model: SpacetimeModel,
    rng: np.random.Generator,
    times: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
    max_atoms: int = 8,
    quantum: float = 1.0 / 16.0,
    rational: bool = True,
    x0_choices: Optional[Sequence[float]] = None,
) -> Evolution:
    """
    The evolution induced by a random weighted family of causal curves.

    Coordinates stay on a dyadic lattice so events compare exactly; slices carry at
    most max_atoms atoms after merging.
    """
    n_curves = int(rng.integers(1, max_atoms + 1))
    grid = np.asarray(times, dtype=float)
    if x0_choices is None:
        x0_choices = np.arange(-16, 17) * quantum
    weights = random_weights(rng, n_curves, rational)
    curves = [
        random_causal_curve(model, rng, grid, max_speed=1.0, x0=float(rng.choice(x0_choices)), quantum=quantum)
        for _ in range(n_curves)
    ]
    slices = [
        SliceMeasure.from_atoms(t, [(c.point(k), w) for c, w in zip(curves, weights)])
        for k, t in enumerate(grid)
    ]
    return Evolution.from_slices(slices)
