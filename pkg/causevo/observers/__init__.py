from .frame import ObserverFrame, frame_battery, frame_from_descriptor, parameter_window, uniform_frame_grid
from .transform import (
    CurrentCheck,
    CurrentRecord,
    FrameData,
    NonPositiveClockRateError,
    ObserverTransformer,
    disintegrate_eta,
    frame_data,
    invariant_current_check,
    relative_discrepancy,
    transform_eta_and_field,
    transform_sigma,
)
from .worldline import WorldlineMeasure, canonical_representative, deparametrize

__all__ = [
    "ObserverFrame",
    "frame_battery",
    "frame_from_descriptor",
    "parameter_window",
    "uniform_frame_grid",
    "CurrentCheck",
    "CurrentRecord",
    "FrameData",
    "NonPositiveClockRateError",
    "ObserverTransformer",
    "disintegrate_eta",
    "frame_data",
    "invariant_current_check",
    "relative_discrepancy",
    "transform_eta_and_field",
    "transform_sigma",
    "WorldlineMeasure",
    "canonical_representative",
    "deparametrize",
]
