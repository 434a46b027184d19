import math
from abc import abstractmethod
from typing import Any, Dict, FrozenSet, Tuple

import numpy as np
from numpy.typing import ArrayLike

from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import SpacetimeKind, SpacetimeModel


class FrameNotSupportedError(ValueError):
    pass


class TemporalFunction(SpacetimeFunction):
    """
    A Cauchy temporal function: the global time of an observer.

    Its gradient is past-directed timelike, so it strictly increases along every
    future-directed causal curve.
    """

    supported_kinds: FrozenSet[SpacetimeKind] = frozenset(SpacetimeKind)
    is_affine: bool = False

    def supports(self, model: SpacetimeModel) -> bool:
        return model.kind in self.supported_kinds

    def require_support(self, model: SpacetimeModel) -> None:
        if not self.supports(model):
            raise FrameNotSupportedError(
                f"Temporal function {self.function_id} is not defined on {model.kind.value}; "
                f"supported: {sorted(k.value for k in self.supported_kinds)}"
            )

    def gradient_norm(self, model: SpacetimeModel, t: ArrayLike, x: ArrayLike) -> np.ndarray:
        dt, dx = self.gradient(t, x)
        return model.gradient_norm(dt, dx, t, x)

    def is_timelike_on(self, model: SpacetimeModel, t: ArrayLike, x: ArrayLike) -> bool:
        """Level sets are spacelike and T increases to the future at every sampled point."""
        dt, dx = self.gradient(t, x)
        norm = model.gradient_norm(dt, dx, t, x)
        return bool(np.all(np.isfinite(norm)) and np.all(np.asarray(dt) > 0))

    @abstractmethod
    def descriptor(self) -> Dict[str, Any]:
        pass


class CanonicalTime(TemporalFunction):
    """T(t, x) = t."""

    function_id = "canonical"
    is_affine = True

    def __call__(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return t.copy()

    def gradient(self, t, x) -> Tuple[np.ndarray, np.ndarray]:
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.ones(t.shape), np.zeros(t.shape)

    def descriptor(self):
        return {"kind": "canonical"}


class BoostTime(TemporalFunction):
    """Time of an inertial observer moving with velocity v: (t - v x) / sqrt(1 - v^2)."""

    supported_kinds = frozenset({SpacetimeKind.MINKOWSKI})
    is_affine = True

    def __init__(self, v: float):
        if not abs(v) < 1.0:
            raise ValueError(f"Boost velocity must satisfy |v| < 1, got {v}")
        self.v = float(v)
        self.gamma = 1.0 / math.sqrt(1.0 - self.v ** 2)
        self.function_id = f"boost({self.v:g})"

    def __call__(self, t, x):
        return (np.asarray(t, dtype=float) - self.v * np.asarray(x, dtype=float)) * self.gamma

    def gradient(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.full(t.shape, self.gamma), np.full(t.shape, -self.v * self.gamma)

    def descriptor(self):
        return {"kind": "boost", "v": self.v}


class ShearedTime(TemporalFunction):
    """T(t, x) = t + lam * tanh(x), timelike since |lam sech^2 x| < 1."""

    supported_kinds = frozenset({SpacetimeKind.MINKOWSKI})

    def __init__(self, lam: float):
        if not abs(lam) < 1.0:
            raise ValueError(f"Shear must satisfy |lambda| < 1, got {lam}")
        self.lam = float(lam)
        self.function_id = f"sheared({self.lam:g})"

    def __call__(self, t, x):
        return np.asarray(t, dtype=float) + self.lam * np.tanh(np.asarray(x, dtype=float))

    def gradient(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.ones(t.shape), self.lam / np.cosh(x) ** 2

    def descriptor(self):
        return {"kind": "sheared", "lam": self.lam}


CANONICAL = CanonicalTime()


def temporal_from_descriptor(descriptor: Dict[str, Any]) -> TemporalFunction:
    """Build a temporal function from `{"kind": "boost", "v": 0.5}` and friends."""
    kind = descriptor.get("kind")
    if kind == "canonical":
        return CANONICAL
    if kind == "boost":
        return BoostTime(float(descriptor["v"]))
    if kind == "sheared":
        return ShearedTime(float(descriptor.get("lam", descriptor.get("lambda"))))
    raise ValueError(f"Unknown temporal function descriptor: {descriptor}")


def temporal_from_literal(literal: str) -> TemporalFunction:
    """Parse `canonical`, `boost:0.5` or `sheared:0.5`."""
    name, _, value = literal.strip().partition(":")
    if name == "canonical":
        return CANONICAL
    if not value:
        raise ValueError(f"Frame literal '{literal}' needs a parameter, e.g. boost:0.5")
    key = "v" if name == "boost" else "lam"
    return temporal_from_descriptor({"kind": name, key: float(value)})
