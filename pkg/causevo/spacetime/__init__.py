from .model import (
    Event,
    EventModelMismatchError,
    GridMismatchError,
    NotCausallyRelatedError,
    SpacetimeKind,
    SpacetimeModel,
)
from .registry import SpacetimeRegistry, spacetime_model
from .models import *
from .functions import SpacetimeFunction, ProductFunction
from .temporal import (
    CANONICAL,
    BoostTime,
    CanonicalTime,
    FrameNotSupportedError,
    ShearedTime,
    TemporalFunction,
    temporal_from_descriptor,
    temporal_from_literal,
)

__all__ = [
    "Event",
    "EventModelMismatchError",
    "GridMismatchError",
    "NotCausallyRelatedError",
    "SpacetimeKind",
    "SpacetimeModel",
    "SpacetimeRegistry",
    "spacetime_model",
    "Minkowski1p1",
    "Cylinder",
    "FLRW1p1",
    "FLRWScale",
    "SpacetimeFunction",
    "ProductFunction",
    "CANONICAL",
    "BoostTime",
    "CanonicalTime",
    "FrameNotSupportedError",
    "ShearedTime",
    "TemporalFunction",
    "temporal_from_descriptor",
    "temporal_from_literal",
]
