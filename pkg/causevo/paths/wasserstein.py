from typing import Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from causevo.curves.operations import uniform_distance
from causevo.paths.model import CurveMeasure
from causevo.spacetime.model import SpacetimeModel


def wasserstein_curve_distance(
    model: SpacetimeModel,
    first: CurveMeasure,
    second: CurveMeasure,
    window: Optional[Tuple[float, float]] = None,
) -> float:
    """1-Wasserstein distance of two atomic curve measures with the uniform distance as ground cost."""
    if window is None:
        window = (max(first.interval[0], second.interval[0]), min(first.interval[1], second.interval[1]))
    n, m = len(first), len(second)
    cost = np.array([
        [uniform_distance(model, g, r, window) for r in second.curves]
        for g in first.curves
    ])

    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate([
        np.array([float(w) for w in first.weights]),
        np.array([float(w) for w in second.weights]),
    ])
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise ValueError(f"Wasserstein LP failed: {res.message}")
    return max(0.0, float(res.fun))
