from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from causevo.logging_config import create_logger
from causevo.measures.coupling import (
    CouplingSolver,
    InfeasibleCouplingError,
    UpsetCheckResult,
    compose_couplings,
    default_upset_family,
)
from causevo.measures.model import Coupling, Evolution
from causevo.spacetime.model import Event, SpacetimeModel
from causevo.utils.numerics import Weight

logger = create_logger("evolution")


@dataclass(frozen=True)
class StepCausality:
    step: int
    interval: Tuple[float, float]
    feasible: bool
    upset: UpsetCheckResult
    certificate: Optional[List[Event]] = None
    flow: Optional[Weight] = None


@dataclass(frozen=True)
class EvolutionCausality:
    steps: List[StepCausality] = field(default_factory=list)

    @property
    def causal(self) -> bool:
        return all(s.feasible for s in self.steps)

    @property
    def first_failure(self) -> Optional[StepCausality]:
        return next((s for s in self.steps if not s.feasible), None)


def check_step(
    solver: CouplingSolver,
    ev: Evolution,
    k: int,
    family: Optional[Sequence[Sequence[Event]]] = None,
) -> StepCausality:
    """
    Max-flow feasibility of step k, cross-checked by the up-set inequality.

    A feasible step is checked on `family`, every subset of up to three atoms plus
    the full support by default; an infeasible one on its certificate.
    """
    mu, nu = ev.slices[k], ev.slices[k + 1]
    flow = solver.max_flow(mu, nu)
    if not flow.feasible:
        family = [tuple(flow.certificate or ())]
    elif family is None:
        family = default_upset_family(mu)
    upset = solver.upset_check(mu, nu, family)
    return StepCausality(k, (ev.times[k], ev.times[k + 1]), flow.feasible, upset, flow.certificate, flow.value)


def causal_evolution_report(model: SpacetimeModel, ev: Evolution, solver: Optional[CouplingSolver] = None) -> EvolutionCausality:
    """Feasibility and up-set margin of every adjacent slice pair."""
    solver = solver or CouplingSolver(model)
    steps = [check_step(solver, ev, k) for k in range(len(ev) - 1)]
    report = EvolutionCausality(steps)
    if report.first_failure is not None:
        logger.info(f"Evolution is not causal on {report.first_failure.interval}")
    return report


def is_causal_evolution(model: SpacetimeModel, ev: Evolution, solver: Optional[CouplingSolver] = None) -> bool:
    """True iff every adjacent pair of slices admits a causal coupling."""
    solver = solver or CouplingSolver(model)
    return all(solver.feasible(ev.slices[k], ev.slices[k + 1]) for k in range(len(ev) - 1))


def chain_coupling(model: SpacetimeModel, ev: Evolution, solver: Optional[CouplingSolver] = None) -> Coupling:
    """
    A causal coupling of the first and last slice, glued from adjacent couplings.
    Raises InfeasibleCouplingError at the first non-causal step.
    """
    solver = solver or CouplingSolver(model)
    if len(ev) < 2:
        raise ValueError("Chain coupling needs at least two slices")
    glued = solver.find(ev.slices[0], ev.slices[1])
    for k in range(1, len(ev) - 1):
        try:
            step = solver.find(ev.slices[k], ev.slices[k + 1])
        except InfeasibleCouplingError as e:
            raise InfeasibleCouplingError(
                f"Step {k} on [{ev.times[k]}, {ev.times[k + 1]}]: {e}", e.certificate, e.margin
            ) from e
        glued = compose_couplings(glued, step)
    return glued
