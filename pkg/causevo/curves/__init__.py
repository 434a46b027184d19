from .model import CausalCurve
from .operations import (
    CurveConcatenationError,
    CurveValidation,
    ReparametrizationError,
    adjacent_causal_gaps,
    concatenate_curves,
    curve_at,
    curve_derivative,
    reparametrize_curve,
    resample_curve,
    uniform_distance,
    validate_curve,
)
from .h1 import EmbeddedTestFunction, h1_pairing, h1_pairing_gap, h1_test_battery

__all__ = [
    "CausalCurve",
    "CurveConcatenationError",
    "CurveValidation",
    "ReparametrizationError",
    "adjacent_causal_gaps",
    "concatenate_curves",
    "curve_at",
    "curve_derivative",
    "reparametrize_curve",
    "resample_curve",
    "uniform_distance",
    "validate_curve",
    "EmbeddedTestFunction",
    "h1_pairing",
    "h1_pairing_gap",
    "h1_test_battery",
]
