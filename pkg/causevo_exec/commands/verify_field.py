import asyncio
from typing import Any, Dict, List, Sequence, Tuple

from causevo.curves.operations import validate_curve
from causevo.field.residuals import ResidualRecord, ToleranceSchedule, refinement_ratios
from causevo.field.suite import ResidualSuite, worst_offender
from causevo.logging_config import create_logger
from causevo.paths.model import CurveMeasure
from causevo.paths.operations import induced_evolution
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import SpacetimeModel
from causevo.testfns.causal import causal_battery
from causevo_exec.commands.common import (
    default_bumps,
    failure,
    load_input,
    refinement_strides,
    sigma_for,
    subsample,
    success,
)
from causevo_exec.run_config import RunConfig
from causevo_exec.storage.objectstore import ObjectStore

logger = create_logger("exec.verify_field")

RESIDUAL_COLUMNS = ["level", "phi_id", "residual_kind", "dt", "value", "tolerance", "pass"]
REFINEMENT_COLUMNS = ["phi_id", "residual_kind", "level", "dt", "value", "ratio"]

LevelRecords = List[Tuple[int, List[ResidualRecord]]]


async def residual_study(
    sigma: CurveMeasure,
    levels: Sequence[int],
    schedule: ToleranceSchedule,
    bumps: Sequence[SpacetimeFunction],
    causal_functions: Sequence[SpacetimeFunction],
) -> LevelRecords:
    """The residual suite on sigma coarsened to every level, levels run concurrently."""
    suite = ResidualSuite(schedule)
    strides = refinement_strides(list(levels))

    def run_level(level: int) -> List[ResidualRecord]:
        coarse = subsample(sigma, strides[level])
        return suite.run(coarse, induced_evolution(coarse), bumps, causal_functions)

    results = await asyncio.gather(*(asyncio.to_thread(run_level, level) for level in levels))
    return list(zip(levels, results))


def residual_rows(study: LevelRecords) -> List[Dict[str, Any]]:
    return [{"level": level, **r.as_row()} for level, records in study for r in records]


def refinement_rows(study: LevelRecords) -> List[Dict[str, Any]]:
    """Per (phi, kind), the residual at every level and its ratio to the next finer level."""
    series: Dict[Tuple[str, str], List[Tuple[int, ResidualRecord]]] = {}
    for level, records in study:
        for r in records:
            series.setdefault((r.phi_id, r.residual_kind), []).append((level, r))
    rows = []
    for (phi_id, kind), points in series.items():
        ratios = refinement_ratios([abs(r.value) for _, r in points]) + [None]
        for (level, r), ratio in zip(points, ratios):
            rows.append({"phi_id": phi_id, "residual_kind": kind, "level": level, "dt": r.dt, "value": r.value, "ratio": ratio})
    return rows


def study_failure(study: LevelRecords) -> Dict[str, Any]:
    """Failure result naming the worst offender; empty when every record passes."""
    records = [r for _, records in study for r in records]
    worst = worst_offender(records)
    if worst is None:
        return {}
    return failure(
        f"{sum(not r.passed for r in records)} residual checks breach their tolerance; worst: "
        f"{worst.residual_kind} for {worst.phi_id} at dt={worst.dt:.3g} "
        f"(value {worst.value:.3g}, tolerance {worst.tolerance:.3g})",
        worst=worst.as_row(),
    )


def invalid_curves(model: SpacetimeModel, sigma: CurveMeasure) -> List[Dict[str, Any]]:
    found = []
    for n, c in enumerate(sigma.curves):
        check = validate_curve(model, c)
        if not check:
            found.append({"curve": n, "sample": check.first_violation, "reason": check.reason})
    return found


async def execute_verify_field(config: RunConfig, store: ObjectStore) -> Dict[str, Any]:
    """Continuity, clock, chain-rule, Lambda and causality residuals across refinement levels."""
    model, data = load_input(config)
    sigma = sigma_for(config, model, data)
    coarsest = subsample(sigma, refinement_strides(config.levels)[config.levels[0]])
    bumps = default_bumps(model, coarsest)
    causal = causal_battery(model, K=[sigma.curves[0].start])

    bad_curves = invalid_curves(model, sigma)
    if bad_curves:
        logger.warning(f"{len(bad_curves)} curves are not causal; first: {bad_curves[0]}")

    study = await residual_study(sigma, config.levels, config.schedule(), bumps, causal)
    await store.save_csv(residual_rows(study), RESIDUAL_COLUMNS, "residuals")
    await store.save_csv(refinement_rows(study), REFINEMENT_COLUMNS, "residual_refinement")

    failed = study_failure(study)
    if failed:
        return {**failed, "invalid_curves": bad_curves}
    return success(
        levels=config.levels,
        checks=sum(len(records) for _, records in study),
        phi_ids=[phi.function_id for phi in bumps],
        invalid_curves=bad_curves,
    )
