from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from causevo.spacetime.functions import SpacetimeFunction
from causevo.testfns.bumps import TestFunctionSupportError


@dataclass(frozen=True)
class OuterFunction:
    """A smooth Theta: R^L -> R with its partial derivatives."""
    name: str
    arity: int
    value: Callable[..., np.ndarray]
    partials: Tuple[Callable[..., np.ndarray], ...]

    def require_vanishing_at_zero(self) -> None:
        at_zero = float(np.asarray(self.value(*([np.zeros(1)] * self.arity)))[0])
        if at_zero != 0.0:
            raise TestFunctionSupportError(f"Theta '{self.name}' must vanish at 0, got {at_zero}")


IDENTITY = OuterFunction("identity", 1, lambda a: a, (lambda a: np.ones_like(a),))
PRODUCT = OuterFunction("product", 2, lambda a, b: a * b, (lambda a, b: b, lambda a, b: a))
SQUARE = OuterFunction("square", 1, lambda a: a ** 2, (lambda a: 2.0 * a,))
SINE = OuterFunction("sine", 1, np.sin, (np.cos,))


def outer_battery() -> List[OuterFunction]:
    return [IDENTITY, PRODUCT, SQUARE, SINE]


class ComposedFunction(SpacetimeFunction):
    """Theta(Phi_1, ..., Phi_L)."""

    def __init__(self, theta: OuterFunction, inner: Sequence[SpacetimeFunction]):
        if len(inner) != theta.arity:
            raise ValueError(f"Theta '{theta.name}' takes {theta.arity} functions, got {len(inner)}")
        self.theta = theta
        self.inner = list(inner)
        self.function_id = f"{theta.name}(" + ",".join(f.function_id for f in self.inner) + ")"

    def __call__(self, t, x):
        return self.theta.value(*[f(t, x) for f in self.inner])

    def gradient(self, t, x):
        values = [f(t, x) for f in self.inner]
        dt, dx = 0.0, 0.0
        for partial, f in zip(self.theta.partials, self.inner):
            ft, fx = f.gradient(t, x)
            weight = partial(*values)
            dt = dt + weight * ft
            dx = dx + weight * fx
        return dt, dx

    @property
    def tolerance_scale(self) -> float:
        scale = 1.0
        for f in self.inner:
            scale *= f.tolerance_scale
        return scale

    @property
    def time_support(self) -> Optional[Tuple[float, float]]:
        supports = [f.time_support for f in self.inner]
        if any(s is None for s in supports):
            return None
        return min(s[0] for s in supports), max(s[1] for s in supports)
