from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from causevo.curves.model import CausalCurve
from causevo.curves.operations import validate_curve
from causevo.measures.model import MarginalMismatchError
from causevo.spacetime.model import GridMismatchError, SpacetimeModel
from causevo.spacetime.temporal import TemporalFunction
from causevo.utils.numerics import Weight, is_unit_mass, weight_sum


@dataclass(frozen=True)
class CurveMeasure:
    """A finite weighted family of causal curves sharing one parameter grid."""
    curves: Tuple[CausalCurve, ...]
    weights: Tuple[Weight, ...]

    def __post_init__(self):
        if len(self.curves) != len(self.weights):
            raise ValueError("Curve measure needs one weight per curve")
        if not self.curves:
            raise ValueError("Curve measure has no atoms")
        grid = self.curves[0].times
        temporal_id = self.curves[0].temporal.function_id
        for c in self.curves[1:]:
            if not np.array_equal(c.times, grid):
                raise GridMismatchError("All curves of a curve measure must share the parameter grid")
            if c.temporal.function_id != temporal_id:
                raise GridMismatchError("All curves of a curve measure must share the temporal function")
        for w in self.weights:
            if not w > 0:
                raise ValueError(f"Curve weights must be positive, got {w}")

    @classmethod
    def from_atoms(cls, atoms: Iterable[Tuple[CausalCurve, Weight]]) -> "CurveMeasure":
        """Build a measure, merging curves with identical samples."""
        merged: Dict[bytes, List] = {}
        for curve, w in atoms:
            key = curve.key()
            if key in merged:
                merged[key][1] = merged[key][1] + w
            else:
                merged[key] = [curve, w]
        return cls(tuple(c for c, _ in merged.values()), tuple(w for _, w in merged.values()))

    @classmethod
    def dirac(cls, curve: CausalCurve, rational: bool = True) -> "CurveMeasure":
        return cls((curve,), (Fraction(1) if rational else 1.0,))

    def __len__(self) -> int:
        return len(self.curves)

    def atoms(self) -> List[Tuple[CausalCurve, Weight]]:
        return list(zip(self.curves, self.weights))

    @property
    def grid(self) -> np.ndarray:
        return self.curves[0].times

    @property
    def interval(self) -> Tuple[float, float]:
        return self.curves[0].interval

    @property
    def temporal(self) -> TemporalFunction:
        return self.curves[0].temporal

    @property
    def is_rational(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    @property
    def total_mass(self) -> Weight:
        return weight_sum(self.weights)

    def index_of(self, t: float) -> int:
        return self.curves[0].index_of(t)

    def validate(self, model: SpacetimeModel, slack: Optional[float] = None) -> None:
        """Raise unless every curve is valid and the total mass is one."""
        if not is_unit_mass(self.weights):
            raise MarginalMismatchError(f"Curve measure has total mass {self.total_mass}")
        for n, c in enumerate(self.curves):
            check = validate_curve(model, c, slack=slack)
            if not check:
                raise ValueError(f"Curve {n} is invalid at sample {check.first_violation}: {check.reason}")

    def same_atoms(self, other: "CurveMeasure") -> bool:
        """Equality as atomic measures on curve space."""
        mine = {c.key(): w for c, w in self.atoms()}
        theirs = {c.key(): w for c, w in other.atoms()}
        return mine == theirs
