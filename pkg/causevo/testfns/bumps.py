from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from causevo.spacetime.functions import SpacetimeFunction

INTERIOR_MARGIN_STEPS = 2


class TestFunctionSupportError(ValueError):
    __test__ = False


def bump_profile(u: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """beta(u) = exp(-1 / (1 - u^2)) on |u| < 1 and its derivative."""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    safe = np.where(inside, u, 0.0)
    denom = 1.0 - safe ** 2
    value = np.where(inside, np.exp(-1.0 / denom), 0.0)
    slope = np.where(inside, value * (-2.0 * safe / denom ** 2), 0.0)
    return value, slope


class BumpFunction(SpacetimeFunction):
    """
    Phi(t, x) = beta((t - t0) / r_t) * beta((x - x0) / r_x).

    With radius_x None the bump does not depend on x. A period wraps x - x0 into
    [-period/2, period/2), which is how bumps live on the cylinder.
    """

    def __init__(
        self,
        t0: float,
        x0: float = 0.0,
        radius_t: float = 1.0,
        radius_x: Optional[float] = 1.0,
        period: Optional[float] = None,
        label: Optional[str] = None,
    ):
        if radius_t <= 0 or (radius_x is not None and radius_x <= 0):
            raise TestFunctionSupportError("Bump radii must be positive")
        if period is not None and radius_x is not None and 2.0 * radius_x >= period:
            raise TestFunctionSupportError(f"Bump support diameter {2 * radius_x} must be below the period {period}")
        self.t0 = float(t0)
        self.x0 = float(x0)
        self.radius_t = float(radius_t)
        self.radius_x = None if radius_x is None else float(radius_x)
        self.period = period
        rx = "inf" if radius_x is None else f"{radius_x:g}"
        self.function_id = label or f"bump(t0={t0:g},x0={x0:g},rt={radius_t:g},rx={rx})"

    def _ux(self, x: np.ndarray) -> np.ndarray:
        d = x - self.x0
        if self.period is not None:
            d = np.mod(d + self.period / 2.0, self.period) - self.period / 2.0
        return d / self.radius_x

    def _factors(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        bt, dbt = bump_profile((t - self.t0) / self.radius_t)
        if self.radius_x is None:
            return bt, dbt, np.ones(t.shape), np.zeros(t.shape)
        bx, dbx = bump_profile(self._ux(x))
        return bt, dbt, bx, dbx

    def __call__(self, t, x):
        bt, _, bx, _ = self._factors(t, x)
        return bt * bx

    def gradient(self, t, x):
        bt, dbt, bx, dbx = self._factors(t, x)
        dx = np.zeros(bt.shape) if self.radius_x is None else bt * dbx / self.radius_x
        return dbt * bx / self.radius_t, dx

    @property
    def tolerance_scale(self) -> float:
        radii = [self.radius_t] + ([] if self.radius_x is None else [self.radius_x])
        return 1.0 / min(radii) ** 2

    @property
    def time_support(self) -> Tuple[float, float]:
        return self.t0 - self.radius_t, self.t0 + self.radius_t

    def descriptor(self) -> dict:
        return {
            "kind": "bump",
            "t0": self.t0,
            "x0": self.x0,
            "radius_t": self.radius_t,
            "radius_x": self.radius_x,
            "period": self.period,
        }


def check_interior_support(
    phi: SpacetimeFunction, times: Sequence[float], margin_steps: int = INTERIOR_MARGIN_STEPS
) -> None:
    """
    Require the time support to stay margin_steps grid steps away from both ends of
    the grid, the discrete form of compact support in the open slab.
    """
    times = np.asarray(times, dtype=float)
    support = phi.time_support
    if support is None:
        raise TestFunctionSupportError(f"{phi.function_id} has no known time support")
    if times.size < 2 * margin_steps + 1:
        raise TestFunctionSupportError("Grid is too short to hold an interior test function")
    lo, hi = times[margin_steps], times[-1 - margin_steps]
    if support[0] < lo or support[1] > hi:
        raise TestFunctionSupportError(
            f"{phi.function_id} has time support [{support[0]:g}, {support[1]:g}] "
            f"outside the interior window [{lo:g}, {hi:g}]"
        )


def interior_bump_battery(
    times: Sequence[float],
    centers_t: Sequence[float],
    radius_t: float,
    centers_x: Optional[Sequence[float]] = None,
    radius_x: Optional[float] = 1.0,
    period: Optional[float] = None,
) -> List[BumpFunction]:
    """Bumps at the given centers, each checked to sit inside the grid window."""
    centers_x = [0.0] * len(centers_t) if centers_x is None else centers_x
    battery = [
        BumpFunction(t0, x0, radius_t, radius_x, period)
        for t0, x0 in zip(centers_t, centers_x)
    ]
    for phi in battery:
        check_interior_support(phi, times)
    return battery
