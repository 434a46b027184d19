import math

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, Field
from scipy.integrate import simpson

from causevo.config import CONFIG
from causevo.spacetime.model import Scalar, SpacetimeKind, SpacetimeModel
from causevo.spacetime.registry import spacetime_model


class FLRWScale(BaseModel):
    """Scale factor a(t) = 1 + eps * t^2."""
    eps: float = Field(default=0.0, ge=0.0, description="Quadratic growth coefficient of the scale factor")


@spacetime_model(
    kind="flrw",
    description="Spatially flat 1+1 FLRW g = -dt^2 + a(t)^2 dx^2 with a(t) = 1 + eps t^2",
    param_model=FLRWScale
)
class FLRW1p1(SpacetimeModel):
    kind = SpacetimeKind.FLRW
    embedding_dim = 2

    def __init__(self, scale: FLRWScale = FLRWScale()):
        self.scale = scale

    @property
    def eps(self) -> float:
        return self.scale.eps

    def scale_factor(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return 1.0 + self.eps * t ** 2

    def spatial_metric(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        a = self.scale_factor(t)
        return np.broadcast_to(a ** 2, np.broadcast(np.asarray(t), np.asarray(x)).shape).copy()

    def descriptor(self):
        return {"kind": self.kind.value, "scale": {"eps": self.eps}}

    def _simpson_piece(self, t0: float, t1: float) -> float:
        step = CONFIG.CONFORMAL_STEP
        n = max(2, 2 * math.ceil(abs(t1 - t0) / (2.0 * step)))
        s = np.linspace(t0, t1, n + 1)
        return float(simpson(1.0 / self.scale_factor(s), x=s))

    def chart_time(self, t: ArrayLike) -> Scalar:
        """Conformal time tau(t) = int_0^t ds / a(s), by fixed-step composite Simpson."""
        t_arr = np.asarray(t, dtype=float)
        if self.eps == 0.0:
            return t_arr.copy()

        flat = t_arr.ravel()
        nodes = np.unique(np.concatenate([flat, [0.0]]))
        zero = int(np.searchsorted(nodes, 0.0))
        pieces = np.array([self._simpson_piece(a, b) for a, b in zip(nodes[:-1], nodes[1:])])
        tau = np.concatenate([[0.0], np.cumsum(pieces)])
        tau -= tau[zero]
        out = tau[np.searchsorted(nodes, flat)]
        return out.reshape(t_arr.shape) if t_arr.ndim else float(out[0])

    @property
    def chart_is_canonical(self) -> bool:
        return self.eps == 0.0

    def chart_time_rate(self, t: ArrayLike) -> np.ndarray:
        return 1.0 / self.scale_factor(t)

    def conformal_time_exact(self, t: ArrayLike) -> Scalar:
        """Closed form of chart_time for the quadratic scale factor."""
        t = np.asarray(t, dtype=float)
        if self.eps == 0.0:
            return t
        r = math.sqrt(self.eps)
        return np.arctan(r * t) / r

    def spatial_separation(self, x1: ArrayLike, x2: ArrayLike) -> Scalar:
        return np.abs(np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float))

    def embed_coords(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.stack([t, x], axis=-1)
