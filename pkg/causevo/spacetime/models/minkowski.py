import numpy as np
from numpy.typing import ArrayLike

from causevo.spacetime.model import Scalar, SpacetimeKind, SpacetimeModel
from causevo.spacetime.registry import spacetime_model


@spacetime_model(
    kind="minkowski",
    description="Flat 1+1 Minkowski spacetime g = -dt^2 + dx^2 with the identity embedding"
)
class Minkowski1p1(SpacetimeModel):
    kind = SpacetimeKind.MINKOWSKI
    embedding_dim = 2

    def chart_time(self, t: ArrayLike) -> Scalar:
        return np.asarray(t, dtype=float)

    def spatial_separation(self, x1: ArrayLike, x2: ArrayLike) -> Scalar:
        return np.abs(np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float))

    def embed_coords(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.stack([t, x], axis=-1)
