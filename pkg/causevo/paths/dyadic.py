from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from causevo.logging_config import create_logger
from causevo.measures.coupling import CouplingSolver, InfeasibleCouplingError
from causevo.measures.model import Evolution
from causevo.paths.model import CurveMeasure
from causevo.paths.operations import concatenate_curve_measures
from causevo.spacetime.connect import connecting_causal_curve
from causevo.spacetime.model import Event, GridMismatchError, SpacetimeModel


class DyadicStepError(ValueError):
    """A step of the construction found no causal coupling."""

    def __init__(self, step: int, interval: Tuple[float, float], certificate: Optional[List[Event]] = None, reason: str = ""):
        super().__init__(f"No causal coupling on dyadic step {step} [{interval[0]}, {interval[1]}]: {reason}")
        self.step = step
        self.interval = interval
        self.certificate = certificate


def dyadic_times(interval: Tuple[float, float], level: int) -> List[float]:
    """a + i (b - a) / 2^n for i = 0..2^n."""
    if level < 0:
        raise ValueError(f"Dyadic level must be nonnegative, got {level}")
    a, b = interval
    n = 2 ** level
    return [a + i * (b - a) / n for i in range(n + 1)]


class DyadicConstructor:
    """
    Builds a curve measure from a causal evolution.

    Each step couples consecutive slices with the solver's min-cost causal coupling,
    lifts every pair carrying mass to the model's connecting curve, and concatenates
    the step measures.
    """

    def __init__(self, model: SpacetimeModel, solver: Optional[CouplingSolver] = None):
        self.model = model
        self.solver = solver or CouplingSolver(model)
        self.logger = create_logger("DyadicConstructor")

    def construct(self, ev: Evolution, level: int, sample_grid: Optional[ArrayLike] = None) -> CurveMeasure:
        """
        sigma_n for the dyadic partition of level n. Curves are sampled at the dyadic
        times, or on sample_grid when it is given (it must contain them).
        """
        partition = [ev.times[ev.index_of(t)] for t in dyadic_times(ev.interval, level)]
        self.logger.info(f"Dyadic construction at level {level} on [{ev.interval[0]}, {ev.interval[1]}]")
        return self.construct_on_partition(ev, partition, sample_grid)

    def construct_on_partition(
        self,
        ev: Evolution,
        partition: Sequence[float],
        sample_grid: Optional[ArrayLike] = None,
    ) -> CurveMeasure:
        if len(partition) < 2:
            raise GridMismatchError("A partition needs at least two times")
        grid = None if sample_grid is None else np.asarray(sample_grid, dtype=float)
        if grid is not None:
            missing = [t for t in partition if not np.any(grid == t)]
            if missing:
                raise GridMismatchError(f"Sample grid misses partition times {missing[:3]}")

        sigma: Optional[CurveMeasure] = None
        for step, (t0, t1) in enumerate(zip(partition[:-1], partition[1:])):
            step_measure = self._lift_step(ev, step, t0, t1, grid)
            sigma = step_measure if sigma is None else concatenate_curve_measures(sigma, step_measure)
            self.logger.debug(f"Step {step} on [{t0}, {t1}]: {len(step_measure)} curves, {len(sigma)} after folding")

        assert sigma is not None
        return sigma

    def _lift_step(self, ev: Evolution, step: int, t0: float, t1: float, grid: Optional[np.ndarray]) -> CurveMeasure:
        mu, nu = ev.slice_at(t0), ev.slice_at(t1)
        try:
            coupling = self.solver.find(mu, nu)
        except InfeasibleCouplingError as e:
            raise DyadicStepError(step, (t0, t1), e.certificate, str(e)) from e

        times = np.array([t0, t1]) if grid is None else grid[(grid >= t0) & (grid <= t1)]
        atoms = [
            (connecting_causal_curve(self.model, p, q, times, slack=self.solver.slack), w)
            for p, q, w in coupling.pairs()
        ]
        return CurveMeasure.from_atoms(atoms)


def dyadic_construct_sigma(
    model: SpacetimeModel,
    ev: Evolution,
    level: int,
    solver: Optional[CouplingSolver] = None,
    sample_grid: Optional[ArrayLike] = None,
) -> CurveMeasure:
    return DyadicConstructor(model, solver).construct(ev, level, sample_grid)


def construct_sigma_on_grid(model: SpacetimeModel, ev: Evolution, solver: Optional[CouplingSolver] = None) -> CurveMeasure:
    """The same construction with every grid time as a partition point."""
    return DyadicConstructor(model, solver).construct_on_partition(ev, list(ev.times))
