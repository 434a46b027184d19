from typing import Dict, List, Sequence, Tuple

import numpy as np

from causevo.config import CONFIG
from causevo.logging_config import create_logger
from causevo.field.model import FieldEvaluation
from causevo.measures.model import Evolution, MarginalMismatchError, eta_atoms
from causevo.paths.model import CurveMeasure
from causevo.paths.operations import pushforward_eval
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import Event, GridMismatchError
from causevo.utils.numerics import central_difference


class FieldBuilder:
    """
    The vector field of a curve measure at the atoms of eta.

    X(Phi)(t_k, q) is the weighted mean of (Phi o gamma)'(t_k) over the curves through
    q at time t_k, with the derivative taken by central differences along each curve.
    """

    def __init__(self, sigma: CurveMeasure, ev: Evolution, check_marginals: bool = True):
        self.sigma = sigma
        self.ev = ev
        self.logger = create_logger("FieldBuilder")
        if sigma.grid.size != len(ev) or not np.allclose(sigma.grid, ev.grid, rtol=0.0, atol=CONFIG.GRID_TOL):
            raise GridMismatchError("Curve measure and evolution must share the grid")
        if check_marginals:
            self._check_marginals()

        self.atoms = eta_atoms(ev)
        lookup: Dict[Tuple[int, Event], int] = {
            (int(k), Event(float(t), float(x))): a
            for a, (k, (t, x)) in enumerate(zip(self.atoms.slice_index, self.atoms.coords))
        }
        self._curve_atoms: List[np.ndarray] = []
        for c in sigma.curves:
            idx = np.array([lookup[(k, c.point(k))] for k in range(len(c))], dtype=int)
            self._curve_atoms.append(idx)
        self._curve_weights = np.array([float(w) for w in sigma.weights])
        self._grid_step = float(np.max(np.diff(ev.grid))) if len(ev) > 1 else 0.0

    def _check_marginals(self) -> None:
        exact = self.sigma.is_rational and self.ev.is_rational
        for k, t in enumerate(self.sigma.grid):
            pushed = pushforward_eval(self.sigma, float(t))
            if not pushed.same_atoms(self.ev.slices[k], tol=0.0 if exact else 1e-12):
                raise MarginalMismatchError(f"Curve measure does not reproduce the slice at time {t}")

    @property
    def grid_step(self) -> float:
        return self._grid_step

    def build_from_samples(self, function_id: str, samples: Sequence[np.ndarray]) -> FieldEvaluation:
        """Field values from per-curve sampled functions (one array per curve)."""
        numer = np.zeros(len(self.atoms))
        for idx, w, c, g in zip(self._curve_atoms, self._curve_weights, self.sigma.curves, samples):
            np.add.at(numer, idx, w * central_difference(g, c.times))
        return FieldEvaluation(function_id, self.atoms, numer / self.atoms.slice_mass)

    def build(self, phi: SpacetimeFunction) -> FieldEvaluation:
        return self.build_from_samples(phi.function_id, [np.asarray(phi(c.ts, c.xs), dtype=float) for c in self.sigma.curves])

    def values_at_atoms(self, phi: SpacetimeFunction) -> np.ndarray:
        return np.asarray(phi(self.atoms.coords[:, 0], self.atoms.coords[:, 1]), dtype=float)


def build_field(sigma: CurveMeasure, ev: Evolution, phi: SpacetimeFunction) -> FieldEvaluation:
    return FieldBuilder(sigma, ev).build(phi)
