from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from causevo.config import CONFIG
from causevo.spacetime.model import Event, GridMismatchError
from causevo.spacetime.temporal import CANONICAL, TemporalFunction


@dataclass(eq=False)
class CausalCurve:
    """
    A causal curve sampled on a parameter grid.

    `times` are the values of the parametrizing temporal function and `coords` the
    (t, x) model coordinates of the sampled points, so that temporal(coords[k]) equals
    times[k]. Curves parametrized by the canonical time have coords[:, 0] == times.
    """
    times: np.ndarray
    coords: np.ndarray
    temporal: TemporalFunction = field(default=CANONICAL)

    def __post_init__(self):
        self.times = np.array(self.times, dtype=float).reshape(-1)
        self.coords = np.array(self.coords, dtype=float).reshape(-1, 2)
        if self.times.size == 0:
            raise GridMismatchError("A curve needs at least one sample")
        if self.coords.shape[0] != self.times.size:
            raise GridMismatchError(
                f"Curve has {self.times.size} grid times but {self.coords.shape[0]} points"
            )
        if np.any(np.diff(self.times) <= 0):
            raise GridMismatchError("Curve grid times must be strictly increasing")
        self.times.setflags(write=False)
        self.coords.setflags(write=False)

    @classmethod
    def from_events(cls, times: ArrayLike, events: List[Event], temporal: TemporalFunction = CANONICAL) -> "CausalCurve":
        return cls(np.asarray(times, dtype=float), np.array([[p.t, p.x] for p in events], dtype=float), temporal)

    @classmethod
    def from_path(cls, times: ArrayLike, xs: ArrayLike) -> "CausalCurve":
        """Canonically parametrized curve t -> (t, x(t))."""
        times = np.asarray(times, dtype=float)
        return cls(times, np.column_stack([times, np.broadcast_to(np.asarray(xs, dtype=float), times.shape)]))

    def __len__(self) -> int:
        return self.times.size

    @property
    def ts(self) -> np.ndarray:
        return self.coords[:, 0]

    @property
    def xs(self) -> np.ndarray:
        return self.coords[:, 1]

    @property
    def interval(self) -> Tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    @property
    def is_canonical(self) -> bool:
        return self.temporal.function_id == CANONICAL.function_id

    def point(self, k: int) -> Event:
        return Event(float(self.coords[k, 0]), float(self.coords[k, 1]))

    @property
    def points(self) -> List[Event]:
        return [Event(float(t), float(x)) for t, x in self.coords]

    @property
    def start(self) -> Event:
        return self.point(0)

    @property
    def end(self) -> Event:
        return self.point(-1)

    def index_of(self, t: float, tol: Optional[float] = None) -> int:
        """Index of the grid time t, located within GRID_TOL."""
        tol = CONFIG.GRID_TOL if tol is None else tol
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > tol * max(1.0, abs(t)):
            raise GridMismatchError(f"Time {t} is not on the curve grid {self.interval}")
        return k

    def covers(self, a: float, b: float, tol: Optional[float] = None) -> bool:
        tol = CONFIG.GRID_TOL if tol is None else tol
        return self.times[0] - tol <= a and b <= self.times[-1] + tol

    def key(self) -> bytes:
        """Identity of the sample arrays; curves with equal keys are the same atom."""
        return self.temporal.function_id.encode() + b"|" + self.times.tobytes() + self.coords.tobytes()

    def same_samples(self, other: "CausalCurve") -> bool:
        return self.key() == other.key()

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "times": [float(t) for t in self.times],
            "points": [[float(t), float(x)] for t, x in self.coords],
        }
        if not self.is_canonical:
            doc["frame"] = self.temporal.descriptor()
        return doc

    def __repr__(self) -> str:
        return f"CausalCurve(n={len(self)}, interval={self.interval}, frame={self.temporal.function_id})"
