from typing import List, Optional, Sequence

import numpy as np

from causevo.curves.model import CausalCurve
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import Event, SpacetimeKind, SpacetimeModel
from causevo.spacetime.temporal import CANONICAL, TemporalFunction


class NullCoordinateArctan(SpacetimeFunction):
    """arctan(t - x) or arctan(t + x): bounded functions of a null coordinate."""

    def __init__(self, sign: int = -1):
        if sign not in (-1, 1):
            raise ValueError("sign must be -1 or +1")
        self.sign = sign
        self.function_id = "arctan(t-x)" if sign < 0 else "arctan(t+x)"
        self.kind = "null_coord_minus" if sign < 0 else "null_coord_plus"

    def __call__(self, t, x):
        return np.arctan(np.asarray(t, dtype=float) + self.sign * np.asarray(x, dtype=float))

    def gradient(self, t, x):
        u = np.asarray(t, dtype=float) + self.sign * np.asarray(x, dtype=float)
        d = 1.0 / (1.0 + u ** 2)
        return d, self.sign * d


class TimeArctan(SpacetimeFunction):
    """arctan(T) for a temporal function T."""

    kind = "time_only"

    def __init__(self, temporal: TemporalFunction = CANONICAL):
        self.temporal = temporal
        self.function_id = "arctan(t)" if temporal is CANONICAL else f"arctan({temporal.function_id})"

    def __call__(self, t, x):
        return np.arctan(self.temporal(t, x))

    def gradient(self, t, x):
        d = 1.0 / (1.0 + self.temporal(t, x) ** 2)
        dt, dx = self.temporal.gradient(t, x)
        return d * dt, d * dx


class SetTimeFunction(SpacetimeFunction):
    """
    f_K(p) = max over k in K of causal_gap(k, p): the chart time of p minus the
    earliest chart time at which a causal signal from K reaches p's position.
    Nonnegative exactly on J+(K), and nondecreasing along causal curves.
    """

    def __init__(self, model: SpacetimeModel, K: Sequence[Event]):
        if len(K) == 0:
            raise ValueError("The set K must be nonempty")
        self.model = model
        self.K = list(K)
        self.function_id = "f_K[" + ";".join(f"({k.t:g},{k.x:g})" for k in self.K) + "]"

    def _gaps(self, t, x) -> np.ndarray:
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.stack([np.asarray(self.model.causal_gap(k, t, x), dtype=float) for k in self.K])

    def __call__(self, t, x):
        return np.max(self._gaps(t, x), axis=0)

    def gradient(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        best = np.argmax(self._gaps(t, x), axis=0)
        kx = np.array([k.x for k in self.K])[best]
        disp = np.asarray(self.model.spatial_displacement(kx, x), dtype=float)
        return self.model.chart_time_rate(t) * np.ones(t.shape), -np.sign(disp)


def phi_n(n: int, s: np.ndarray) -> np.ndarray:
    """exp(-1 / (n s)) for s > 0, else 0."""
    s = np.asarray(s, dtype=float)
    positive = s > 0
    safe = np.where(positive, s, 1.0)
    return np.where(positive, np.exp(-1.0 / (n * safe)), 0.0)


class PhiOfCausal(SpacetimeFunction):
    """phi_n composed with a causal function; tends to the indicator of {f > 0} as n grows."""

    kind = "phi_n_of_f"

    def __init__(self, n: int, f: SpacetimeFunction):
        if n < 1:
            raise ValueError("n must be a positive integer")
        self.n = n
        self.f = f
        self.function_id = f"phi_{n}({f.function_id})"

    def __call__(self, t, x):
        return phi_n(self.n, self.f(t, x))

    def gradient(self, t, x):
        s = np.asarray(self.f(t, x), dtype=float)
        positive = s > 0
        safe = np.where(positive, s, 1.0)
        slope = np.where(positive, phi_n(self.n, s) / (self.n * safe ** 2), 0.0)
        dt, dx = self.f.gradient(t, x)
        return slope * dt, slope * dx


def is_causal_along(f: SpacetimeFunction, gamma: CausalCurve, tol: float = 1e-12) -> bool:
    """f o gamma is nondecreasing on the sample grid."""
    values = np.asarray(f(gamma.ts, gamma.xs), dtype=float)
    return bool(np.all(np.diff(values) >= -tol))


def causal_battery(
    model: SpacetimeModel,
    K: Optional[Sequence[Event]] = None,
    n_values: Sequence[int] = (1, 4, 16),
) -> List[SpacetimeFunction]:
    """Smooth bounded causal functions per model, plus phi_n o f_K."""
    battery: List[SpacetimeFunction] = []
    if model.kind is SpacetimeKind.MINKOWSKI:
        battery.extend([NullCoordinateArctan(-1), NullCoordinateArctan(1)])
    battery.append(TimeArctan())
    if K is None:
        K = [Event(0.0, 0.0)]
    f = SetTimeFunction(model, K)
    battery.extend(PhiOfCausal(n, f) for n in n_values)
    return battery
