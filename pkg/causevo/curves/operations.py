from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import brentq

from causevo.config import CONFIG
from causevo.curves.model import CausalCurve
from causevo.spacetime.model import Event, GridMismatchError, SpacetimeModel
from causevo.spacetime.temporal import TemporalFunction
from causevo.utils.numerics import central_difference


class CurveConcatenationError(ValueError):
    pass


class ReparametrizationError(ValueError):
    pass


@dataclass(frozen=True)
class CurveValidation:
    valid: bool
    first_violation: Optional[int] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.valid


def adjacent_causal_gaps(model: SpacetimeModel, gamma: CausalCurve) -> np.ndarray:
    """causal_gap(points[k], points[k+1]) for every adjacent pair."""
    chart = np.asarray(model.chart_time(gamma.ts), dtype=float)
    return np.diff(chart) - np.asarray(model.spatial_separation(gamma.xs[:-1], gamma.xs[1:]), dtype=float)


def validate_curve(
    model: SpacetimeModel,
    gamma: CausalCurve,
    slack: Optional[float] = None,
    param_tol: Optional[float] = None,
) -> CurveValidation:
    """
    Check that adjacent samples are causally ordered and that the parametrizing
    temporal function takes the grid value at every sample. Adjacent pairs suffice
    because the causal relation is transitive.
    """
    slack = CONFIG.CAUSAL_SLACK if slack is None else slack
    if param_tol is None:
        param_tol = 0.0 if gamma.is_canonical else CONFIG.RESAMPLE_TOL

    bad = ~np.isfinite(gamma.coords).all(axis=1) | (np.asarray(model.normalize_x(gamma.xs)) != gamma.xs)
    if bad.any():
        return CurveValidation(False, int(np.argmax(bad)), "invalid event")

    param_err = np.abs(np.asarray(gamma.temporal(gamma.ts, gamma.xs)) - gamma.times)
    off = param_err > param_tol * np.maximum(1.0, np.abs(gamma.times))
    if off.any():
        return CurveValidation(False, int(np.argmax(off)), "parametrization")

    if len(gamma) > 1:
        gaps = adjacent_causal_gaps(model, gamma)
        acausal = gaps < -slack
        if acausal.any():
            return CurveValidation(False, int(np.argmax(acausal)) + 1, "causal order")

    return CurveValidation(True)


def unwrapped_xs(model: SpacetimeModel, gamma: CausalCurve) -> np.ndarray:
    """Spatial coordinate lifted along the curve (undoes the cylinder's angle wrap)."""
    steps = np.asarray(model.spatial_displacement(gamma.xs[:-1], gamma.xs[1:]), dtype=float)
    return gamma.xs[0] + np.concatenate([[0.0], np.cumsum(steps)])


def curve_derivative(model: SpacetimeModel, gamma: CausalCurve, k: Optional[int] = None):
    """Spatial velocity dx/dt: central differences inside the grid, one-sided at the ends."""
    if len(gamma) < 2:
        raise GridMismatchError("Velocity is undefined on a single-point grid")
    v = central_difference(unwrapped_xs(model, gamma), gamma.ts)
    return v if k is None else float(v[k])


def _segment_point(
    model: SpacetimeModel,
    temporal: TemporalFunction,
    p: Event,
    q: Event,
    s_p: float,
    s_q: float,
    value: float,
) -> Event:
    """Point with temporal value `value` on the connecting curve between samples p and q."""
    if temporal.function_id == "canonical":
        return Event(float(value), float(model.interpolate_x(p, q, np.array([value]))[0]))

    if temporal.is_affine and model.chart_is_canonical:
        lam = (value - s_p) / (s_q - s_p)
        t = p.t + lam * (q.t - p.t)
        return Event(float(t), float(model.interpolate_x(p, q, np.array([t]))[0]))

    def offset(t: float) -> float:
        x = model.interpolate_x(p, q, np.array([t]))[0]
        return float(temporal(t, x)) - value

    lo, hi = offset(p.t), offset(q.t)
    if lo >= 0.0:
        return p
    if hi <= 0.0:
        return q
    t = brentq(offset, p.t, q.t, xtol=1e-15, rtol=4.0 * np.finfo(float).eps)
    return Event(float(t), float(model.interpolate_x(p, q, np.array([t]))[0]))


def parameter_values(gamma: CausalCurve, temporal: TemporalFunction) -> np.ndarray:
    if temporal.function_id == gamma.temporal.function_id:
        return np.asarray(gamma.times, dtype=float)
    return np.asarray(temporal(gamma.ts, gamma.xs), dtype=float)


def reparametrize_curve(
    model: SpacetimeModel,
    gamma: CausalCurve,
    temporal: TemporalFunction,
    new_grid: ArrayLike,
) -> CausalCurve:
    """
    gamma composed with the inverse of temporal along gamma, sampled on new_grid.

    The inverse is taken piecewise on the sample grid; between samples the curve
    follows the model's connecting curve.
    """
    temporal.require_support(model)
    s = parameter_values(gamma, temporal)
    grid = np.array(new_grid, dtype=float).reshape(-1)

    drops = np.diff(s)
    if np.any(drops < -CONFIG.MONOTONE_TOL):
        k = int(np.argmax(drops < -CONFIG.MONOTONE_TOL))
        raise ReparametrizationError(
            f"{temporal.function_id} decreases along the curve between samples {k} and {k + 1}"
        )
    s = np.maximum.accumulate(s)

    tol = CONFIG.GRID_TOL
    if grid.size == 0 or grid[0] < s[0] - tol * max(1.0, abs(s[0])) or grid[-1] > s[-1] + tol * max(1.0, abs(s[-1])):
        raise ReparametrizationError(
            f"Grid [{grid[0] if grid.size else None}, {grid[-1] if grid.size else None}] "
            f"is outside the range [{s[0]}, {s[-1]}] of {temporal.function_id} along the curve"
        )

    points = gamma.coords
    out = np.empty((grid.size, 2))
    for j, tau in enumerate(grid):
        if tau <= s[0]:
            out[j] = points[0]
            continue
        if tau >= s[-1]:
            out[j] = points[-1]
            continue
        k = int(np.searchsorted(s, tau, side="right")) - 1
        if s[k] == tau:
            out[j] = points[k]
            continue
        if tau == s[k + 1]:
            out[j] = points[k + 1]
            continue
        if s[k + 1] == s[k]:
            out[j] = points[k]
            continue
        p = Event(float(points[k, 0]), float(points[k, 1]))
        q = Event(float(points[k + 1, 0]), float(points[k + 1, 1]))
        e = _segment_point(model, temporal, p, q, float(s[k]), float(s[k + 1]), float(tau))
        out[j] = (e.t, e.x)

    if temporal.function_id == "canonical":
        out[:, 0] = grid
    return CausalCurve(grid, out, temporal)


def resample_curve(model: SpacetimeModel, gamma: CausalCurve, new_times: ArrayLike) -> CausalCurve:
    """The same curve, in its own parametrization, on another grid."""
    return reparametrize_curve(model, gamma, gamma.temporal, new_times)


def curve_at(model: SpacetimeModel, gamma: CausalCurve, s: float) -> Event:
    return resample_curve(model, gamma, np.array([s])).point(0)


def concatenate_curves(first: CausalCurve, second: CausalCurve) -> CausalCurve:
    """Join a curve on [a, b] with one on [b, c]; the shared endpoint must match exactly."""
    if first.temporal.function_id != second.temporal.function_id:
        raise CurveConcatenationError(
            f"Curves are parametrized by different temporal functions: "
            f"{first.temporal.function_id} and {second.temporal.function_id}"
        )
    if first.times[-1] != second.times[0]:
        raise CurveConcatenationError(
            f"Curve intervals do not meet: first ends at {first.times[-1]}, second starts at {second.times[0]}"
        )
    if not np.array_equal(first.coords[-1], second.coords[0]):
        raise CurveConcatenationError(f"Endpoint mismatch: {first.end} != {second.start}")

    return CausalCurve(
        np.concatenate([first.times, second.times[1:]]),
        np.concatenate([first.coords, second.coords[1:]]),
        first.temporal,
    )


def common_window(curves) -> Tuple[float, float]:
    a = max(c.times[0] for c in curves)
    b = min(c.times[-1] for c in curves)
    return float(a), float(b)


def refinement_grid(window: Tuple[float, float], *curves: CausalCurve) -> np.ndarray:
    """Union of the curves' grid times inside the window, window endpoints included."""
    a, b = window
    parts = [np.array([a, b])]
    for c in curves:
        parts.append(c.times[(c.times > a) & (c.times < b)])
    return np.unique(np.concatenate(parts))


def _check_window(window: Tuple[float, float], *curves: CausalCurve) -> None:
    a, b = window
    if a > b:
        raise GridMismatchError(f"Empty window [{a}, {b}]")
    for c in curves:
        if not c.covers(a, b):
            raise GridMismatchError(f"Window [{a}, {b}] is not covered by {c}")


def uniform_distance(
    model: SpacetimeModel,
    gamma: CausalCurve,
    rho: CausalCurve,
    window: Optional[Tuple[float, float]] = None,
) -> float:
    """Max over the common refinement of |embed(gamma(t)) - embed(rho(t))|."""
    window = common_window([gamma, rho]) if window is None else window
    _check_window(window, gamma, rho)
    grid = refinement_grid(window, gamma, rho)
    g = resample_curve(model, gamma, grid).coords
    r = resample_curve(model, rho, grid).coords
    diff = model.embed_coords(g[:, 0], g[:, 1]) - model.embed_coords(r[:, 0], r[:, 1])
    return float(np.max(np.linalg.norm(diff, axis=1)))
