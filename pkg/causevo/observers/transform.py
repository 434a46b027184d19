from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from causevo.config import CONFIG
from causevo.curves.operations import reparametrize_curve
from causevo.field.builder import FieldBuilder
from causevo.field.extension import extend_field
from causevo.field.model import FieldEvaluation
from causevo.logging_config import create_logger
from causevo.measures.model import Evolution, SliceMeasure
from causevo.observers.frame import ObserverFrame, uniform_frame_grid
from causevo.paths.model import CurveMeasure
from causevo.paths.operations import induced_evolution
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import SpacetimeModel
from causevo.testfns.partition import uniform_time_partition
from causevo.utils.numerics import compensated_sum


class NonPositiveClockRateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FrameData:
    """A curve measure, its evolution and its field, all expressed in one frame."""
    frame: ObserverFrame
    sigma: CurveMeasure
    ev: Evolution
    builder: FieldBuilder

    @property
    def dt(self) -> float:
        return self.builder.grid_step


@dataclass(frozen=True)
class CurrentRecord:
    frame_a: str
    frame_b: str
    psi_id: str
    phi_id: str
    dt: float
    lhs: float
    rhs: float
    discrepancy: float

    def as_row(self) -> dict:
        return {
            "frame_a": self.frame_a,
            "frame_b": self.frame_b,
            "psi_id": self.psi_id,
            "phi_id": self.phi_id,
            "dt": self.dt,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "discrepancy": self.discrepancy,
        }


@dataclass(frozen=True)
class CurrentCheck:
    records: Tuple[CurrentRecord, ...]

    @property
    def worst(self) -> float:
        return max((r.discrepancy for r in self.records), default=0.0)

    def worst_record(self) -> Optional[CurrentRecord]:
        return max(self.records, key=lambda r: r.discrepancy, default=None)


def relative_discrepancy(lhs: float, rhs: float, eps: Optional[float] = None) -> float:
    eps = CONFIG.CURRENT_EPS if eps is None else eps
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + eps)


class ObserverTransformer:
    """
    Moves curve measures, evolutions and fields between global observers.

    Curves are reparametrized by the target frame's temporal function; the slices of
    the target frame are then the evaluation pushforwards of the new curve measure.
    """

    def __init__(self, model: SpacetimeModel):
        self.model = model
        self.logger = create_logger("ObserverTransformer")

    def transform_sigma(self, sigma: CurveMeasure, frame: ObserverFrame, new_grid: Optional[ArrayLike] = None) -> CurveMeasure:
        frame.validate(self.model)
        grid = frame.grid if new_grid is None else np.asarray(new_grid, dtype=float)
        if grid is None:
            grid = uniform_frame_grid(sigma, frame.temporal)
        curves = [reparametrize_curve(self.model, c, frame.temporal, grid) for c in sigma.curves]
        self.logger.debug(f"Reparametrized {len(curves)} curves by {frame.frame_id} on {len(grid)} slices")
        return CurveMeasure(tuple(curves), sigma.weights)

    def frame_data(self, sigma: CurveMeasure, frame: ObserverFrame, steps: Optional[int] = None) -> FrameData:
        """sigma, its evolution and its field as seen by the observer of `frame`."""
        same_frame = frame.temporal.function_id == sigma.temporal.function_id
        if same_frame and frame.grid is None and steps is None:
            sigma_b = sigma
        else:
            grid = frame.grid if frame.grid is not None else uniform_frame_grid(sigma, frame.temporal, steps)
            sigma_b = self.transform_sigma(sigma, frame, grid)
        ev_b = induced_evolution(sigma_b)
        self.logger.info(f"Frame {frame.frame_id}: {len(sigma_b)} curves, {len(ev_b)} slices on {ev_b.interval}")
        return FrameData(frame.with_grid(sigma_b.grid), sigma_b, ev_b, FieldBuilder(sigma_b, ev_b, check_marginals=False))

    def clock_rate(self, builder: FieldBuilder, frame: ObserverFrame) -> FieldEvaluation:
        """X_A T_B at the atoms of eta_A, through a partition of unity in chart time."""
        frame.validate(self.model)
        t = builder.atoms.coords[:, 0]
        window = (float(np.min(t)), float(np.max(t)))
        spacing = max((window[1] - window[0]) / 4.0, builder.grid_step, 1e-6)
        partition = uniform_time_partition(window, spacing).members()
        return extend_field(builder, frame.temporal, partition)

    def transform_eta_and_field(
        self,
        builder: FieldBuilder,
        fields: Sequence[FieldEvaluation],
        frame: ObserverFrame,
    ) -> Tuple[np.ndarray, List[FieldEvaluation]]:
        """eta_B = X_A T_B eta_A and X_B = X_A / X_A T_B at the atoms of eta_A."""
        rate = self.clock_rate(builder, frame).values
        if np.any(rate <= 0.0):
            a = int(np.argmin(rate))
            t, x = builder.atoms.coords[a]
            raise NonPositiveClockRateError(
                f"X({frame.frame_id}) = {rate[a]:.6g} at atom ({t}, {x}); the field is not future-directed causal"
            )
        eta_b = builder.atoms.eta_weight * rate
        return eta_b, [f.scaled(1.0 / rate) for f in fields]

    def disintegrate_eta(self, sigma: CurveMeasure, frame: ObserverFrame, tau: float) -> SliceMeasure:
        """The T_B = tau slice: every curve evaluated where it crosses the level set."""
        frame.validate(self.model)
        atoms = [
            (reparametrize_curve(self.model, c, frame.temporal, np.array([tau])).point(0), w)
            for c, w in sigma.atoms()
        ]
        return SliceMeasure.from_atoms(float(tau), atoms, frame.temporal)

    def invariant_current_check(
        self,
        first: FrameData,
        second: FrameData,
        psis: Sequence[SpacetimeFunction],
        phis: Sequence[SpacetimeFunction],
        eps: Optional[float] = None,
    ) -> CurrentCheck:
        """
        Compare int X_A(Psi) phi d eta_A with int X_B(Psi) phi d eta_B for every pair.
        Both sides approximate the same integral along the curves.
        """
        records = []
        phi_a = [first.builder.values_at_atoms(p) for p in phis]
        phi_b = [second.builder.values_at_atoms(p) for p in phis]
        for psi in psis:
            xa = first.builder.build(psi).values * first.builder.atoms.eta_weight
            xb = second.builder.build(psi).values * second.builder.atoms.eta_weight
            for phi, va, vb in zip(phis, phi_a, phi_b):
                lhs, rhs = compensated_sum(xa * va), compensated_sum(xb * vb)
                records.append(CurrentRecord(
                    first.frame.frame_id,
                    second.frame.frame_id,
                    psi.function_id,
                    phi.function_id,
                    first.dt,
                    lhs,
                    rhs,
                    relative_discrepancy(lhs, rhs, eps),
                ))
        check = CurrentCheck(tuple(records))
        self.logger.info(
            f"Invariant current {first.frame.frame_id} vs {second.frame.frame_id}: "
            f"worst discrepancy {check.worst:.3g} over {len(records)} pairs"
        )
        return check


def transform_sigma(model: SpacetimeModel, sigma: CurveMeasure, frame: ObserverFrame, new_grid: Optional[ArrayLike] = None) -> CurveMeasure:
    return ObserverTransformer(model).transform_sigma(sigma, frame, new_grid)


def frame_data(model: SpacetimeModel, sigma: CurveMeasure, frame: ObserverFrame, steps: Optional[int] = None) -> FrameData:
    return ObserverTransformer(model).frame_data(sigma, frame, steps)


def transform_eta_and_field(
    model: SpacetimeModel,
    builder: FieldBuilder,
    fields: Sequence[FieldEvaluation],
    frame: ObserverFrame,
) -> Tuple[np.ndarray, List[FieldEvaluation]]:
    return ObserverTransformer(model).transform_eta_and_field(builder, fields, frame)


def disintegrate_eta(model: SpacetimeModel, sigma: CurveMeasure, frame: ObserverFrame, tau: float) -> SliceMeasure:
    return ObserverTransformer(model).disintegrate_eta(sigma, frame, tau)


def invariant_current_check(
    model: SpacetimeModel,
    first: FrameData,
    second: FrameData,
    psis: Sequence[SpacetimeFunction],
    phis: Sequence[SpacetimeFunction],
    eps: Optional[float] = None,
) -> CurrentCheck:
    return ObserverTransformer(model).invariant_current_check(first, second, psis, phis, eps)
