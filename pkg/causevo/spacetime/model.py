import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike

TWO_PI = 2.0 * math.pi

Scalar = Union[float, np.ndarray]


class EventModelMismatchError(ValueError):
    pass


class NotCausallyRelatedError(ValueError):
    pass


class GridMismatchError(ValueError):
    pass


class SpacetimeKind(Enum):
    """Closed-form globally hyperbolic models."""
    MINKOWSKI = "minkowski"
    CYLINDER = "cylinder"
    FLRW = "flrw"


@dataclass(frozen=True, order=True)
class Event:
    """A point of the 1+1 dimensional spacetime in model coordinates (t, x)."""
    t: float
    x: float

    def as_list(self) -> list:
        return [self.t, self.x]


class SpacetimeModel(ABC):
    """
    A globally hyperbolic spacetime given in closed form.

    The metric reads g = -alpha dt^2 + gbar dx^2 in model coordinates. Causal relations
    are decided in the chart (chart_time, x), in which the light cones are at 45 degrees:
    chart_time is t itself for the flat models and the conformal time for FLRW.
    """

    kind: SpacetimeKind
    embedding_dim: int = 2

    # Metric data

    def alpha(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        return np.ones(np.broadcast(np.asarray(t), np.asarray(x)).shape)

    def theta(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        """Conformal factor making h complete; 1 for every model shipped here."""
        return np.ones(np.broadcast(np.asarray(t), np.asarray(x)).shape)

    def spatial_metric(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        """Coefficient of gbar = gbar_xx dx^2."""
        return np.ones(np.broadcast(np.asarray(t), np.asarray(x)).shape)

    @abstractmethod
    def chart_time(self, t: ArrayLike) -> Scalar:
        """Time coordinate in which null rays have unit slope."""

    @abstractmethod
    def spatial_separation(self, x1: ArrayLike, x2: ArrayLike) -> Scalar:
        """Nonnegative spatial distance measured in the chart."""

    def spatial_displacement(self, x1: ArrayLike, x2: ArrayLike) -> Scalar:
        """Signed displacement from x1 to x2 along which connecting curves move."""
        return np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float)

    def normalize_x(self, x: ArrayLike) -> Scalar:
        return np.asarray(x, dtype=float)

    def validate_event(self, p: Event) -> Event:
        if not isinstance(p, Event):
            raise EventModelMismatchError(f"Expected an Event, got {type(p).__name__}")
        if not (math.isfinite(p.t) and math.isfinite(p.x)):
            raise EventModelMismatchError(f"Event {p} has non-finite coordinates")
        return p

    def descriptor(self) -> Dict[str, Any]:
        return {"kind": self.kind.value}

    @property
    def chart_is_canonical(self) -> bool:
        """True when chart_time is t itself, so connecting curves are affine in t."""
        return True

    def chart_time_rate(self, t: ArrayLike) -> np.ndarray:
        """d chart_time / dt."""
        return np.ones(np.asarray(t).shape)

    # Causal structure

    def causal_gap(self, p: Event, t: ArrayLike, x: ArrayLike) -> Scalar:
        """Chart-time separation minus spatial separation from p; >= 0 iff inside J+(p)."""
        return (self.chart_time(t) - self.chart_time(p.t)) - self.spatial_separation(p.x, x)

    def causally_precedes(self, p: Event, q: Event, slack: float = 0.0) -> bool:
        self.validate_event(p)
        self.validate_event(q)
        return bool(self.causal_gap(p, q.t, q.x) >= -slack)

    def chronologically_precedes(self, p: Event, q: Event, slack: float = 0.0) -> bool:
        self.validate_event(p)
        self.validate_event(q)
        return bool(self.causal_gap(p, q.t, q.x) + slack > 0.0)

    def in_causal_future_of_set(self, K: Sequence[Event], q: Event, slack: float = 0.0) -> bool:
        if len(K) == 0:
            raise ValueError("The set K must be nonempty")
        return any(self.causally_precedes(p, q, slack) for p in K)

    def rest_points(self, x: float, times: ArrayLike) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        return np.column_stack([times, np.full(times.shape, float(self.normalize_x(x)))])

    def interpolate_x(self, p: Event, q: Event, times: ArrayLike) -> np.ndarray:
        """Spatial positions on the connecting curve from p to q at the given canonical times."""
        times = np.asarray(times, dtype=float)
        if q.t == p.t:
            return np.full(times.shape, p.x)
        c_p, c_q = self.chart_time(p.t), self.chart_time(q.t)
        s = (np.asarray(self.chart_time(times)) - c_p) / (c_q - c_p)
        delta = float(self.spatial_displacement(p.x, q.x))
        return np.asarray(self.normalize_x(p.x + s * delta), dtype=float)

    def connecting_points(self, p: Event, q: Event, times: ArrayLike) -> np.ndarray:
        """(K, 2) samples of the connecting curve; endpoints are p and q exactly."""
        times = np.asarray(times, dtype=float)
        coords = np.column_stack([times, self.interpolate_x(p, q, times)])
        coords[0] = (p.t, p.x)
        coords[-1] = (q.t, q.x)
        return coords

    # Riemannian side

    def metric_speed(self, v: ArrayLike, p: Event) -> Scalar:
        """sqrt(h(X, X)) for the tangent X = d/dt + v d/dx at p, h = theta*alpha dt^2 + theta*gbar."""
        v = np.asarray(v, dtype=float)
        th = self.theta(p.t, p.x)
        speed = np.sqrt(th * (self.alpha(p.t, p.x) + self.spatial_metric(p.t, p.x) * v ** 2))
        return float(speed) if speed.ndim == 0 else speed

    def speed_bound(self, p: Event) -> float:
        return float(np.sqrt(2.0 * self.theta(p.t, p.x) * self.alpha(p.t, p.x)))

    @abstractmethod
    def embed_coords(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        """Vectorized embedding; returns an array of shape (..., embedding_dim)."""

    def embed(self, p: Event) -> np.ndarray:
        self.validate_event(p)
        return self.embed_coords(np.asarray(p.t), np.asarray(p.x))

    def gradient_norm(self, dt: ArrayLike, dx: ArrayLike, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        """|grad T| = sqrt(-g^{-1}(dT, dT)) for a covector dT = dt dt + dx dx (nan if not timelike)."""
        norm2 = np.asarray(dt) ** 2 / self.alpha(t, x) - np.asarray(dx) ** 2 / self.spatial_metric(t, x)
        with np.errstate(invalid="ignore"):
            return np.where(norm2 > 0, np.sqrt(np.abs(norm2)), np.nan)

    def events(self, coords: Iterable[Sequence[float]]) -> list:
        return [self.validate_event(Event(float(c[0]), float(c[1]))) for c in coords]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpacetimeModel) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(repr(sorted(self.descriptor().items())))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor()})"
