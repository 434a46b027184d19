from .model import FieldEvaluation
from .builder import FieldBuilder, build_field
from .residuals import (
    ResidualRecord,
    ToleranceSchedule,
    causality_residual,
    chain_rule_residual,
    clock_normalization_residual,
    continuity_residual,
    lambda_curve,
    lambda_derivative_check,
    refinement_ratios,
)
from .extension import PartitionOfUnityError, extend_field
from .velocity import coordinate_velocity, four_velocity, three_velocity
from .suite import ResidualSuite, worst_offender

__all__ = [
    "FieldEvaluation",
    "FieldBuilder",
    "build_field",
    "ResidualRecord",
    "ToleranceSchedule",
    "causality_residual",
    "chain_rule_residual",
    "clock_normalization_residual",
    "continuity_residual",
    "lambda_curve",
    "lambda_derivative_check",
    "refinement_ratios",
    "PartitionOfUnityError",
    "extend_field",
    "coordinate_velocity",
    "four_velocity",
    "three_velocity",
    "ResidualSuite",
    "worst_offender",
]
