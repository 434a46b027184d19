import asyncio
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from causevo.config import CONFIG as CORE_CONFIG
from causevo.curves.operations import parameter_values
from causevo.field.residuals import ToleranceSchedule
from causevo.logging_config import create_logger
from causevo.observers.frame import ObserverFrame, frame_battery, parameter_window
from causevo.observers.transform import CurrentCheck, ObserverTransformer
from causevo.observers.worldline import deparametrize
from causevo.paths.model import CurveMeasure
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import SpacetimeModel
from causevo_exec.commands.common import (
    default_bumps,
    default_weights,
    failure,
    load_input,
    refinement_strides,
    sigma_for,
    subsample,
    success,
)
from causevo_exec.run_config import RunConfig
from causevo_exec.storage.objectstore import ObjectStore

logger = create_logger("exec.transform")

INVARIANCE_COLUMNS = ["level", "frame_a", "frame_b", "psi_id", "phi_id", "dt", "lhs", "rhs", "discrepancy"]
TREND_COLUMNS = ["frame", "level", "dt", "worst", "clock_residual", "min_clock_rate", "worldline_equal", "pass"]


@dataclass(frozen=True, eq=False)
class FrameStudy:
    """Everything checked for one frame at one refinement level."""
    level: int
    frame_id: str
    dt: float
    current: CurrentCheck
    clock_residual: float
    min_clock_rate: float
    worldline_equal: Optional[bool]
    current_tolerance: float
    clock_tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.current.worst <= self.current_tolerance
            and self.clock_residual <= self.clock_tolerance
            and self.min_clock_rate > 0.0
            and self.worldline_equal is not False
        )

    def trend_row(self) -> Dict[str, Any]:
        return {
            "frame": self.frame_id,
            "level": self.level,
            "dt": self.dt,
            "worst": self.current.worst,
            "clock_residual": self.clock_residual,
            "min_clock_rate": self.min_clock_rate,
            "worldline_equal": self.worldline_equal,
            "pass": self.passed,
        }


def covers_every_curve(sigma: CurveMeasure, frame: ObserverFrame) -> bool:
    """Whether the frame's common window keeps every curve whole."""
    lo, hi = parameter_window(sigma, frame.temporal)
    tol = CORE_CONFIG.GRID_TOL * max(1.0, abs(lo), abs(hi))
    for c in sigma.curves:
        values = parameter_values(c, frame.temporal)
        if values[0] < lo - tol or values[-1] > hi + tol:
            return False
    return True


def study_frame(
    transformer: ObserverTransformer,
    sigma: CurveMeasure,
    frame: ObserverFrame,
    level: int,
    schedule: ToleranceSchedule,
    psis: Sequence[SpacetimeFunction],
    phis: Sequence[SpacetimeFunction],
    eps: Optional[float],
) -> FrameStudy:
    model = transformer.model
    reference = transformer.frame_data(sigma, ObserverFrame(sigma.temporal))
    data = transformer.frame_data(sigma, frame)
    current = transformer.invariant_current_check(reference, data, psis, phis, eps)
    clock = float(np.max(np.abs(data.builder.build(frame.temporal).values - 1.0)))

    rates = transformer.clock_rate(reference.builder, frame).values
    min_rate = float(np.min(rates))
    if min_rate <= 0.0:
        logger.warning(f"X({frame.frame_id}) is not positive at level {level}: min {min_rate:.6g}")

    worldline_equal = None
    if covers_every_curve(sigma, frame):
        tol = max(CORE_CONFIG.RESAMPLE_TOL, schedule.quadratic(reference.dt))
        steps = sigma.grid.size - 1
        worldline_equal = deparametrize(model, sigma, steps).equals(deparametrize(model, data.sigma, steps), tol)

    return FrameStudy(
        level=level,
        frame_id=frame.frame_id,
        dt=reference.dt,
        current=current,
        clock_residual=clock,
        min_clock_rate=min_rate,
        worldline_equal=worldline_equal,
        current_tolerance=schedule.continuity(reference.dt),
        clock_tolerance=schedule.quadratic(data.dt),
    )


async def observer_study(
    model: SpacetimeModel,
    sigma: CurveMeasure,
    frames: Sequence[ObserverFrame],
    levels: Sequence[int],
    schedule: ToleranceSchedule,
    psis: Sequence[SpacetimeFunction],
    phis: Sequence[SpacetimeFunction],
    eps: Optional[float] = None,
) -> List[FrameStudy]:
    """Invariant current, clock normalization and worldline checks per (level, frame), run concurrently."""
    for frame in frames:
        frame.validate(model)
    transformer = ObserverTransformer(model)
    strides = refinement_strides(list(levels))
    jobs = [(level, frame) for level in levels for frame in frames]
    return list(await asyncio.gather(*(
        asyncio.to_thread(study_frame, transformer, subsample(sigma, strides[level]), frame, level, schedule, psis, phis, eps)
        for level, frame in jobs
    )))


def invariance_rows(studies: Sequence[FrameStudy]) -> List[Dict[str, Any]]:
    return [{"level": s.level, **r.as_row()} for s in studies for r in s.current.records]


def observer_failure(studies: Sequence[FrameStudy]) -> Dict[str, Any]:
    bad = [s for s in studies if not s.passed]
    if not bad:
        return {}
    worst = max(bad, key=lambda s: s.current.worst / s.current_tolerance)
    record = worst.current.worst_record()
    return failure(
        f"{len(bad)} frame checks fail; worst: {worst.frame_id} at level {worst.level} "
        f"(discrepancy {worst.current.worst:.3g}, tolerance {worst.current_tolerance:.3g}, "
        f"clock residual {worst.clock_residual:.3g}, worldline equal {worst.worldline_equal})",
        worst=None if record is None else record.as_row(),
    )


async def execute_transform(config: RunConfig, store: ObjectStore) -> Dict[str, Any]:
    """Observer invariance of the Radon current and of the worldline measure over a frame battery."""
    model, data = load_input(config)
    temporals = config.temporal_functions()
    frames = frame_battery(model) if temporals is None else [ObserverFrame(t) for t in temporals]
    for frame in frames:
        frame.validate(model)

    sigma = sigma_for(config, model, data)
    coarsest = subsample(sigma, refinement_strides(config.levels)[config.levels[0]])
    psis = default_bumps(model, coarsest)
    phis = default_weights(model, coarsest)

    studies = await observer_study(model, sigma, frames, config.levels, config.schedule(), psis, phis, config.current_eps)
    await store.save_csv(invariance_rows(studies), INVARIANCE_COLUMNS, "invariance")
    await store.save_csv([s.trend_row() for s in studies], TREND_COLUMNS, "discrepancy_vs_dt")

    failed = observer_failure(studies)
    if failed:
        return failed
    return success(
        frames=[f.frame_id for f in frames],
        levels=config.levels,
        worst_discrepancy=max(s.current.worst for s in studies),
        worst_clock_residual=max(s.clock_residual for s in studies),
    )
