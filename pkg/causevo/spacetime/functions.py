from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from causevo.spacetime.model import Event


class SpacetimeFunction(ABC):
    """A smooth scalar function on events, vectorized over coordinate arrays."""

    function_id: str = "function"

    @abstractmethod
    def __call__(self, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        pass

    @abstractmethod
    def gradient(self, t: ArrayLike, x: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """(d/dt, d/dx) at the given coordinates."""
        pass

    @property
    def tolerance_scale(self) -> float:
        """Scale entering the residual tolerance schedule."""
        return 1.0

    @property
    def time_support(self) -> Optional[Tuple[float, float]]:
        """A closed time window containing the support, when one is known."""
        return None

    def at(self, p: Event) -> float:
        return float(self(np.asarray(p.t, dtype=float), np.asarray(p.x, dtype=float)))

    def gradient_at(self, p: Event) -> Tuple[float, float]:
        dt, dx = self.gradient(np.asarray(p.t, dtype=float), np.asarray(p.x, dtype=float))
        return float(dt), float(dx)

    def __mul__(self, other: "SpacetimeFunction") -> "ProductFunction":
        return ProductFunction(self, other)


class ProductFunction(SpacetimeFunction):
    def __init__(self, left: SpacetimeFunction, right: SpacetimeFunction):
        self.left = left
        self.right = right
        self.function_id = f"{left.function_id}*{right.function_id}"

    def __call__(self, t, x):
        return self.left(t, x) * self.right(t, x)

    def gradient(self, t, x):
        lt, lx = self.left.gradient(t, x)
        rt, rx = self.right.gradient(t, x)
        a, b = self.left(t, x), self.right(t, x)
        return lt * b + a * rt, lx * b + a * rx

    @property
    def tolerance_scale(self) -> float:
        return self.left.tolerance_scale * self.right.tolerance_scale

    @property
    def time_support(self) -> Optional[Tuple[float, float]]:
        supports = [s for s in (self.left.time_support, self.right.time_support) if s is not None]
        if not supports:
            return None
        return max(s[0] for s in supports), min(s[1] for s in supports)
