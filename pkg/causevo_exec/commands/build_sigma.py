import asyncio
from typing import Any, Dict, List, Optional

from causevo.io.schema import curve_measure_to_dict
from causevo.logging_config import create_logger
from causevo.measures.model import Evolution
from causevo.paths.dyadic import DyadicConstructor, DyadicStepError, dyadic_times
from causevo.paths.model import CurveMeasure
from causevo.paths.operations import pushforward_eval
from causevo.paths.wasserstein import wasserstein_curve_distance
from causevo_exec.commands.common import event_list, failure, load_evolution_input, solver_for, success
from causevo_exec.run_config import RunConfig
from causevo_exec.storage.objectstore import ObjectStore

logger = create_logger("exec.build_sigma")

DIAGNOSTIC_COLUMNS = ["level", "curves", "dyadic_times", "marginals_exact", "max_marginal_error", "wasserstein_to_previous"]


def marginal_errors(ev: Evolution, sigma: CurveMeasure, level: int) -> List[float]:
    """Per dyadic time, the largest weight difference between sigma's pushforward and the slice."""
    errors = []
    for t in dyadic_times(ev.interval, level):
        k = ev.index_of(t)
        pushed = pushforward_eval(sigma, ev.times[k]).as_dict()
        target = ev.slices[k].as_dict()
        events = set(pushed) | set(target)
        errors.append(max(abs(float(pushed.get(e, 0) - target.get(e, 0))) for e in events))
    return errors


def marginals_exact(ev: Evolution, sigma: CurveMeasure, level: int) -> bool:
    return all(
        pushforward_eval(sigma, ev.times[ev.index_of(t)]).same_atoms(ev.slices[ev.index_of(t)])
        for t in dyadic_times(ev.interval, level)
    )


async def execute_build_sigma(config: RunConfig, store: ObjectStore) -> Dict[str, Any]:
    """sigma_n for every requested dyadic level, with marginal and Wasserstein diagnostics."""
    model, ev = load_evolution_input(config)
    constructor = DyadicConstructor(model, solver_for(config, model))

    try:
        sigmas: List[CurveMeasure] = list(await asyncio.gather(
            *(asyncio.to_thread(constructor.construct, ev, level) for level in config.levels)
        ))
    except DyadicStepError as e:
        logger.info(f"Construction stopped on step {e.step} {e.interval}")
        return failure(str(e), step=e.step, interval=list(e.interval), certificate=event_list(e.certificate))

    rows = []
    previous: Optional[CurveMeasure] = None
    files = {}
    for level, sigma in zip(config.levels, sigmas):
        files[str(level)] = await store.save_json(curve_measure_to_dict(model, sigma), f"sigma_level{level}")
        errors = marginal_errors(ev, sigma, level)
        rows.append({
            "level": level,
            "curves": len(sigma),
            "dyadic_times": len(errors),
            "marginals_exact": marginals_exact(ev, sigma, level),
            "max_marginal_error": max(errors),
            "wasserstein_to_previous": None if previous is None else wasserstein_curve_distance(model, previous, sigma),
        })
        previous = sigma

    await store.save_csv(rows, DIAGNOSTIC_COLUMNS, "sigma_diagnostics")
    inexact = [r["level"] for r in rows if not r["marginals_exact"]]
    if inexact and config.rational:
        return failure(f"Marginals are not reproduced exactly at levels {inexact}", files=files)
    return success(levels=config.levels, curves=[len(s) for s in sigmas], files=files)
