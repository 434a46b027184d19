from .minkowski import Minkowski1p1
from .cylinder import Cylinder
from .flrw import FLRW1p1, FLRWScale

__all__ = [
    "Minkowski1p1",
    "Cylinder",
    "FLRW1p1",
    "FLRWScale",
]
