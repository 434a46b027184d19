from typing import List, Optional, Sequence

import numpy as np

from causevo.field.builder import FieldBuilder
from causevo.field.residuals import (
    ResidualRecord,
    ToleranceSchedule,
    causality_residual,
    chain_rule_residual,
    clock_normalization_residual,
    continuity_residual,
    lambda_derivative_check,
)
from causevo.logging_config import create_logger
from causevo.measures.model import Evolution
from causevo.paths.model import CurveMeasure
from causevo.spacetime.functions import SpacetimeFunction
from causevo.testfns.outer import PRODUCT, SQUARE, OuterFunction


class ResidualSuite:
    """Runs the defining properties of the field over a battery of test functions."""

    def __init__(self, schedule: Optional[ToleranceSchedule] = None):
        self.schedule = schedule or ToleranceSchedule()
        self.logger = create_logger("ResidualSuite")

    def run(
        self,
        sigma: CurveMeasure,
        ev: Evolution,
        bumps: Sequence[SpacetimeFunction],
        causal_functions: Sequence[SpacetimeFunction] = (),
        outer: Sequence[OuterFunction] = (PRODUCT, SQUARE),
    ) -> List[ResidualRecord]:
        builder = FieldBuilder(sigma, ev)
        dt = builder.grid_step
        records: List[ResidualRecord] = []

        for phi in bumps:
            s = phi.tolerance_scale
            field = builder.build(phi)
            records.append(ResidualRecord(
                phi.function_id, "continuity", dt,
                continuity_residual(field, ev, phi), self.schedule.continuity(dt, s),
            ))
            records.append(ResidualRecord(
                phi.function_id, "clock", dt,
                clock_normalization_residual(builder, None, phi), self.schedule.quadratic(dt, s),
            ))
            for theta in outer:
                inner = [phi] * theta.arity
                records.append(ResidualRecord(
                    phi.function_id, f"chain_{theta.name}", dt,
                    chain_rule_residual(builder, None, theta, inner), self.schedule.quadratic(dt, s ** theta.arity),
                ))
            records.append(ResidualRecord(
                phi.function_id, "lambda", dt,
                lambda_derivative_check(builder, None, phi), self.schedule.quadratic(dt, s),
            ))
            phi_size = float(np.max(np.abs(builder.values_at_atoms(phi))))
            for f in causal_functions:
                size = phi_size * max(1.0, float(np.max(np.abs(builder.values_at_atoms(f)))))
                records.append(ResidualRecord(
                    f"{phi.function_id}*{f.function_id}", "causality", dt,
                    causality_residual(builder, None, f, phi), self.schedule.roundoff(dt, size),
                    lower_bound=True,
                ))

        failed = [r for r in records if not r.passed]
        self.logger.info(f"Residual suite at dt={dt:.3g}: {len(records)} checks, {len(failed)} failed")
        return records


def worst_offender(records: Sequence[ResidualRecord]) -> Optional[ResidualRecord]:
    """The failing record with the largest breach relative to its tolerance."""
    failed = [r for r in records if not r.passed]
    if not failed:
        return None

    def breach(r: ResidualRecord) -> float:
        excess = (-r.value if r.lower_bound else r.value) - r.tolerance
        return excess / max(r.tolerance, 1e-300)

    return max(failed, key=breach)
