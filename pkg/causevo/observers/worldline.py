from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from causevo.config import CONFIG
from causevo.curves.model import CausalCurve
from causevo.curves.operations import reparametrize_curve
from causevo.paths.model import CurveMeasure
from causevo.spacetime.model import SpacetimeModel
from causevo.spacetime.temporal import CANONICAL
from causevo.utils.numerics import Weight, weight_sum


def canonical_representative(model: SpacetimeModel, gamma: CausalCurve, steps: Optional[int] = None) -> CausalCurve:
    """The image of gamma sampled on a uniform grid of canonical time over its own range."""
    steps = len(gamma) - 1 if steps is None else steps
    ts = gamma.ts
    if ts.size == 1 or ts[-1] == ts[0]:
        return CausalCurve(ts[:1], gamma.coords[:1])
    grid = np.linspace(ts[0], ts[-1], steps + 1)
    return reparametrize_curve(model, gamma, CANONICAL, grid)


def same_image(first: CausalCurve, second: CausalCurve, tol: float) -> bool:
    if first.times.shape != second.times.shape:
        return False
    return bool(np.max(np.abs(first.coords - second.coords)) <= tol)


@dataclass(frozen=True)
class WorldlineMeasure:
    """Weighted unparametrized causal curves, each stored by its canonical representative."""
    atoms: Tuple[Tuple[CausalCurve, Weight], ...]

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def total_mass(self) -> Weight:
        return weight_sum([w for _, w in self.atoms])

    def equals(self, other: "WorldlineMeasure", tol: Optional[float] = None) -> bool:
        """Equal images (within tol) carrying equal weights."""
        tol = CONFIG.RESAMPLE_TOL if tol is None else tol
        unmatched = list(other.atoms)
        for curve, w in self.atoms:
            hit = next((n for n, (c, _) in enumerate(unmatched) if same_image(curve, c, tol)), None)
            if hit is None or abs(float(unmatched[hit][1] - w)) > tol:
                return False
            unmatched.pop(hit)
        return not unmatched


def deparametrize(
    model: SpacetimeModel,
    sigma: CurveMeasure,
    steps: Optional[int] = None,
    tol: Optional[float] = None,
) -> WorldlineMeasure:
    """Forget the parametrization of sigma's curves; images equal within tol merge."""
    tol = CONFIG.RESAMPLE_TOL if tol is None else tol
    merged: List[List] = []
    for curve, w in sigma.atoms():
        rep = canonical_representative(model, curve, steps)
        hit = next((atom for atom in merged if same_image(atom[0], rep, tol)), None)
        if hit is None:
            merged.append([rep, w])
        else:
            hit[1] = hit[1] + w
    return WorldlineMeasure(tuple((c, w) for c, w in merged))
