from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from causevo.curves.model import CausalCurve
from causevo.curves.operations import _check_window, refinement_grid, resample_curve
from causevo.spacetime.model import SpacetimeModel
from causevo.utils.numerics import central_difference, compensated_sum, trapezoid_weights


@dataclass(frozen=True)
class EmbeddedTestFunction:
    """A sampled R^N-valued function v on a time window, with its derivative."""
    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]


def _unit(dim: int, i: int) -> np.ndarray:
    e = np.zeros(dim)
    e[i] = 1.0
    return e


def _profile(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    inside = np.abs(u) < 1.0
    safe = np.where(inside, u, 0.0)
    b = np.where(inside, np.exp(-1.0 / (1.0 - safe ** 2)), 0.0)
    db = np.where(inside, b * (-2.0 * safe / (1.0 - safe ** 2) ** 2), 0.0)
    return b, db


def h1_test_battery(dim: int, window: Tuple[float, float]) -> List[EmbeddedTestFunction]:
    """Constants, linear ramps and one bump per embedding coordinate."""
    a, b = window
    length = b - a
    mid, half = (a + b) / 2.0, length / 2.0
    battery: List[EmbeddedTestFunction] = []
    for i in range(dim):
        e = _unit(dim, i)
        battery.append(EmbeddedTestFunction(
            f"const[{i}]",
            lambda t, e=e: np.outer(np.ones_like(t), e),
            lambda t, e=e: np.outer(np.zeros_like(t), e),
        ))
        battery.append(EmbeddedTestFunction(
            f"ramp[{i}]",
            lambda t, e=e: np.outer((t - a) / length, e),
            lambda t, e=e: np.outer(np.full_like(t, 1.0 / length), e),
        ))
        battery.append(EmbeddedTestFunction(
            f"bump[{i}]",
            lambda t, e=e: np.outer(_profile((t - mid) / half)[0], e),
            lambda t, e=e: np.outer(_profile((t - mid) / half)[1] / half, e),
        ))
    return battery


def h1_pairing(
    model: SpacetimeModel,
    gamma: CausalCurve,
    v: EmbeddedTestFunction,
    window: Optional[Tuple[float, float]] = None,
    reference: Optional[CausalCurve] = None,
) -> float:
    """
    <i o gamma, v>_{H^1} on the window by the trapezoid rule, with (i o gamma)' from
    central differences. Passing a reference curve evaluates on the common
    refinement of both grids.
    """
    window = gamma.interval if window is None else window
    curves = (gamma,) if reference is None else (gamma, reference)
    _check_window(window, *curves)
    grid = refinement_grid(window, *curves)

    coords = resample_curve(model, gamma, grid).coords
    embedded = model.embed_coords(coords[:, 0], coords[:, 1])
    d_embedded = np.column_stack([central_difference(embedded[:, i], grid) for i in range(embedded.shape[1])])

    integrand = np.sum(embedded * v.value(grid), axis=1) + np.sum(d_embedded * v.derivative(grid), axis=1)
    return compensated_sum(trapezoid_weights(grid) * integrand)


def h1_pairing_gap(
    model: SpacetimeModel,
    gamma: CausalCurve,
    rho: CausalCurve,
    v: EmbeddedTestFunction,
    window: Tuple[float, float],
) -> float:
    """|<i o gamma, v> - <i o rho, v>| on a common grid."""
    return abs(
        h1_pairing(model, gamma, v, window, reference=rho)
        - h1_pairing(model, rho, v, window, reference=gamma)
    )
