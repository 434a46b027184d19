import math

import numpy as np
from numpy.typing import ArrayLike

from causevo.spacetime.model import (
    TWO_PI,
    Event,
    EventModelMismatchError,
    Scalar,
    SpacetimeKind,
    SpacetimeModel,
)
from causevo.spacetime.registry import spacetime_model


@spacetime_model(
    kind="cylinder",
    description="Flat cylinder R x S^1 with g = -dt^2 + dtheta^2, embedded as (t, cos theta, sin theta)"
)
class Cylinder(SpacetimeModel):
    kind = SpacetimeKind.CYLINDER
    embedding_dim = 3

    def normalize_x(self, x: ArrayLike) -> Scalar:
        wrapped = np.mod(np.asarray(x, dtype=float), TWO_PI)
        # np.mod can round up to exactly 2*pi for tiny negative inputs
        return np.where(wrapped >= TWO_PI, 0.0, wrapped)

    def validate_event(self, p: Event) -> Event:
        super().validate_event(p)
        if not (0.0 <= p.x < TWO_PI):
            raise EventModelMismatchError(f"Cylinder event {p} must have its angle in [0, 2pi)")
        return p

    def chart_time(self, t: ArrayLike) -> Scalar:
        return np.asarray(t, dtype=float)

    def spatial_separation(self, x1: ArrayLike, x2: ArrayLike) -> Scalar:
        d = np.mod(np.abs(np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float)), TWO_PI)
        return np.minimum(d, TWO_PI - d)

    def spatial_displacement(self, x1: ArrayLike, x2: ArrayLike) -> Scalar:
        """Shorter-arc displacement in [-pi, pi); antipodal ties turn in the positive direction."""
        delta = np.mod(np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float) + math.pi, TWO_PI) - math.pi
        return np.where(delta <= -math.pi, math.pi, delta)

    def embed_coords(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.stack([t, np.cos(x), np.sin(x)], axis=-1)
