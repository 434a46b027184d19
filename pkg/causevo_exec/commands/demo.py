import asyncio
from itertools import combinations
from typing import Any, Dict, List

import numpy as np

from causevo.demos import (
    EXAMPLE1_STEPS,
    EXAMPLE2_ATOMS,
    EXAMPLE2_DRIFTS,
    DemoCase,
    example1,
    example2,
)
from causevo.io.schema import curve_measure_to_dict
from causevo.logging_config import create_logger
from causevo.measures.evolution import causal_evolution_report
from causevo.observers.frame import frame_battery
from causevo.paths.dyadic import DyadicConstructor, DyadicStepError
from causevo.paths.operations import pushforward_eval
from causevo.spacetime.model import TWO_PI
from causevo.testfns.causal import causal_battery
from causevo_exec.commands.build_sigma import marginals_exact
from causevo_exec.commands.check_causal import REPORT_COLUMNS, report_row
from causevo_exec.commands.common import default_weights, failure, solver_for, success
from causevo_exec.commands.transform import INVARIANCE_COLUMNS, TREND_COLUMNS, invariance_rows, observer_failure, observer_study
from causevo_exec.commands.verify_field import (
    REFINEMENT_COLUMNS,
    RESIDUAL_COLUMNS,
    refinement_rows,
    residual_rows,
    residual_study,
    study_failure,
)
from causevo_exec.run_config import RunConfig
from causevo_exec.storage.objectstore import ObjectStore

logger = create_logger("exec.demo")

DEMO_LEVELS = [1, 2, 3]
SIGMA_LEVEL = 3


def example1_steps(config: RunConfig) -> int:
    """Grid steps for --dt, rounded up to a multiple of 8 so that level-3 dyadic times stay on the grid."""
    if config.dt is None:
        return EXAMPLE1_STEPS
    steps = int(np.ceil(TWO_PI / config.dt))
    return int(8 * np.ceil(steps / 8))


def demo_levels(config: RunConfig) -> List[int]:
    return config.levels if len(config.levels) > 1 else DEMO_LEVELS


def grid_marginals_exact(case: DemoCase) -> bool:
    """(ev_t) pushed forward equals the slice at every grid time."""
    return all(pushforward_eval(case.sigma, t).same_atoms(s) for t, s in zip(case.ev.times, case.ev.slices))


async def run_case(config: RunConfig, store: ObjectStore, case: DemoCase, tag: str) -> Dict[str, Any]:
    """Causality, dyadic sigma, residual refinement and observer invariance for one fixture."""
    model, ev, sigma = case.model, case.ev, case.sigma
    solver = solver_for(config, model)
    levels = demo_levels(config)
    schedule = config.schedule()

    report = await asyncio.to_thread(causal_evolution_report, model, ev, solver)
    await store.save_csv([report_row(s) for s in report.steps], REPORT_COLUMNS, f"causal_report_{tag}")
    if not report.causal:
        bad = report.first_failure
        return failure(f"{case.name}: evolution is not causal on {bad.interval}", step=bad.step)

    try:
        dyadic = await asyncio.to_thread(DyadicConstructor(model, solver).construct, ev, SIGMA_LEVEL, ev.times)
    except DyadicStepError as e:
        return failure(f"{case.name}: {e}", step=e.step, interval=list(e.interval))
    await store.save_json(curve_measure_to_dict(model, dyadic), f"sigma_level{SIGMA_LEVEL}_{tag}")

    causal = causal_battery(model, K=[sigma.curves[0].start])
    study = await residual_study(sigma, levels, schedule, case.bumps, causal)
    await store.save_csv(residual_rows(study), RESIDUAL_COLUMNS, f"residuals_{tag}")
    await store.save_csv(refinement_rows(study), REFINEMENT_COLUMNS, f"residual_refinement_{tag}")

    frames = frame_battery(model)
    studies = await observer_study(
        model, sigma, frames, levels, schedule, case.bumps, default_weights(model, sigma), config.current_eps
    )
    await store.save_csv(invariance_rows(studies), INVARIANCE_COLUMNS, f"invariance_{tag}")
    await store.save_csv([s.trend_row() for s in studies], TREND_COLUMNS, f"discrepancy_vs_dt_{tag}")

    exact = marginals_exact(ev, dyadic, SIGMA_LEVEL)
    if config.rational and not exact:
        return failure(f"{case.name}: level-{SIGMA_LEVEL} sigma misses the dyadic marginals")
    for failed in (study_failure(study), observer_failure(studies)):
        if failed:
            return {**failed, "error_message": f"{case.name}: {failed['error_message']}"}

    return success(
        case=case.name,
        steps=len(ev) - 1,
        dyadic_curves=len(dyadic),
        dyadic_marginals_exact=exact,
        residual_checks=sum(len(records) for _, records in study),
        worst_discrepancy=max(s.current.worst for s in studies),
        frames=[f.frame_id for f in frames],
    )


async def demo_example1(config: RunConfig, store: ObjectStore) -> Dict[str, Any]:
    case = example1(example1_steps(config))
    logger.info(f"Example 1 on {len(case.ev) - 1} steps")
    result = await run_case(config, store, case, "example1")
    if result["error_message"] is None and result["dyadic_curves"] != 1:
        return failure(f"Expected a single-curve sigma, got {result['dyadic_curves']} curves")
    return result


async def demo_example2(config: RunConfig, store: ObjectStore) -> Dict[str, Any]:
    cases = [example2(drift, EXAMPLE2_ATOMS) for drift in EXAMPLE2_DRIFTS]
    results = []
    for drift, case in zip(EXAMPLE2_DRIFTS, cases):
        await store.save_json(curve_measure_to_dict(case.model, case.sigma), f"sigma_a{drift:g}")
        if not grid_marginals_exact(case):
            return failure(f"{case.name}: curve positions miss the uniform slices")
        result = await run_case(config, store, case, f"example2_a{drift:g}")
        if result["error_message"] is not None:
            return result
        results.append(result)

    same_evolution = all(
        all(s.same_atoms(r) for s, r in zip(first.ev.slices, second.ev.slices))
        for first, second in combinations(cases, 2)
    )
    distinct = all(not first.sigma.same_atoms(second.sigma) for first, second in combinations(cases, 2))
    if not (same_evolution and distinct):
        return failure("The drift family does not show distinct curve measures over one evolution")
    logger.info(f"{len(cases)} distinct curve measures carry the same evolution")
    return success(drifts=list(EXAMPLE2_DRIFTS), atoms=EXAMPLE2_ATOMS, cases=results, distinct_sigmas=len(cases))


async def execute_demo(config: RunConfig, store: ObjectStore) -> Dict[str, Any]:
    """The worked examples end to end."""
    if config.model is not None:
        logger.warning("--model is ignored by demo; the examples fix their spacetime")
    if config.example == "example1":
        return await demo_example1(config, store)
    return await demo_example2(config, store)
