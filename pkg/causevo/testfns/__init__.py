from .bumps import (
    BumpFunction,
    TestFunctionSupportError,
    bump_profile,
    check_interior_support,
    interior_bump_battery,
)
from .causal import (
    NullCoordinateArctan,
    PhiOfCausal,
    SetTimeFunction,
    TimeArctan,
    causal_battery,
    is_causal_along,
    phi_n,
)
from .outer import IDENTITY, PRODUCT, SINE, SQUARE, ComposedFunction, OuterFunction, outer_battery
from .partition import PartitionMember, TimePartition, uniform_time_partition

__all__ = [
    "BumpFunction",
    "TestFunctionSupportError",
    "bump_profile",
    "check_interior_support",
    "interior_bump_battery",
    "NullCoordinateArctan",
    "PhiOfCausal",
    "SetTimeFunction",
    "TimeArctan",
    "causal_battery",
    "is_causal_along",
    "phi_n",
    "IDENTITY",
    "PRODUCT",
    "SINE",
    "SQUARE",
    "ComposedFunction",
    "OuterFunction",
    "outer_battery",
    "PartitionMember",
    "TimePartition",
    "uniform_time_partition",
]
