from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from causevo.curves.operations import parameter_values
from causevo.paths.model import CurveMeasure
from causevo.spacetime.model import SpacetimeKind, SpacetimeModel
from causevo.spacetime.temporal import (
    CANONICAL,
    BoostTime,
    ShearedTime,
    TemporalFunction,
    temporal_from_descriptor,
)


@dataclass(frozen=True, eq=False)
class ObserverFrame:
    """A global observer: a Cauchy temporal function and its slice grid."""
    temporal: TemporalFunction
    grid: Optional[np.ndarray] = None

    @property
    def frame_id(self) -> str:
        return self.temporal.function_id

    def validate(self, model: SpacetimeModel) -> None:
        self.temporal.require_support(model)

    def descriptor(self) -> Dict[str, Any]:
        return self.temporal.descriptor()

    def with_grid(self, grid: np.ndarray) -> "ObserverFrame":
        return ObserverFrame(self.temporal, np.asarray(grid, dtype=float))


def frame_from_descriptor(descriptor: Dict[str, Any]) -> ObserverFrame:
    return ObserverFrame(temporal_from_descriptor(descriptor))


def frame_battery(model: SpacetimeModel) -> List[ObserverFrame]:
    """Canonical, two boosts and a shear on Minkowski; the canonical frame elsewhere."""
    if model.kind is SpacetimeKind.MINKOWSKI:
        return [ObserverFrame(t) for t in (CANONICAL, BoostTime(0.3), BoostTime(0.6), ShearedTime(0.5))]
    return [ObserverFrame(CANONICAL)]


def parameter_window(sigma: CurveMeasure, temporal: TemporalFunction) -> tuple:
    """The range of temporal values covered by every curve of sigma."""
    ranges = [parameter_values(c, temporal) for c in sigma.curves]
    return float(max(r[0] for r in ranges)), float(min(r[-1] for r in ranges))


def uniform_frame_grid(sigma: CurveMeasure, temporal: TemporalFunction, steps: Optional[int] = None) -> np.ndarray:
    """steps + 1 equally spaced slices of the common parameter window (defaults to sigma's step count)."""
    lo, hi = parameter_window(sigma, temporal)
    if hi <= lo:
        raise ValueError(f"Curves share no {temporal.function_id} window")
    steps = sigma.grid.size - 1 if steps is None else steps
    return np.linspace(lo, hi, steps + 1)
