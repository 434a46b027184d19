from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from causevo.config import CONFIG
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import Event, EventModelMismatchError, GridMismatchError, SpacetimeModel
from causevo.spacetime.temporal import CANONICAL, TemporalFunction
from causevo.utils.numerics import Weight, compensated_sum, is_unit_mass, trapezoid_weights, weight_sum


class MarginalMismatchError(ValueError):
    pass


def merge_atoms(atoms: Iterable[Tuple[Event, Weight]]) -> Dict[Event, Weight]:
    """Sum the weights of atoms at identical events, keeping first-seen order."""
    merged: Dict[Event, Weight] = {}
    for event, weight in atoms:
        if event in merged:
            merged[event] = merged[event] + weight
        else:
            merged[event] = weight
    return merged


@dataclass(frozen=True)
class SliceMeasure:
    """An atomic probability measure carried by one level set of a temporal function."""
    time: float
    events: Tuple[Event, ...]
    weights: Tuple[Weight, ...]
    temporal: TemporalFunction = field(default=CANONICAL, compare=False)

    def __post_init__(self):
        if len(self.events) != len(self.weights):
            raise ValueError("Slice measure needs one weight per event")
        if len(self.events) == 0:
            raise ValueError("Slice measure has no atoms")
        if len(set(self.events)) != len(self.events):
            raise ValueError("Slice measure atoms must be distinct; use SliceMeasure.from_atoms to merge")
        for w in self.weights:
            if not w > 0:
                raise ValueError(f"Atom weights must be positive, got {w}")

    @classmethod
    def from_atoms(
        cls,
        time: float,
        atoms: Iterable[Tuple[Event, Weight]],
        temporal: TemporalFunction = CANONICAL,
    ) -> "SliceMeasure":
        merged = merge_atoms(atoms)
        return cls(float(time), tuple(merged.keys()), tuple(merged.values()), temporal)

    @classmethod
    def dirac(cls, event: Event, rational: bool = True) -> "SliceMeasure":
        return cls(event.t, (event,), (Fraction(1) if rational else 1.0,))

    @classmethod
    def uniform(cls, time: float, events: Sequence[Event], rational: bool = True) -> "SliceMeasure":
        w: Weight = Fraction(1, len(events)) if rational else 1.0 / len(events)
        return cls.from_atoms(time, [(e, w) for e in events])

    def __len__(self) -> int:
        return len(self.events)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    @property
    def total_mass(self) -> Weight:
        return weight_sum(self.weights)

    @property
    def coords(self) -> np.ndarray:
        return np.array([[e.t, e.x] for e in self.events], dtype=float)

    def float_weights(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def as_dict(self) -> Dict[Event, Weight]:
        return dict(zip(self.events, self.weights))

    def mass_of(self, mask: Sequence[bool]) -> Weight:
        return weight_sum([w for w, m in zip(self.weights, mask) if m] or [self._zero()])

    def _zero(self) -> Weight:
        return Fraction(0) if self.is_rational else 0.0

    def normalized(self) -> "SliceMeasure":
        total = self.total_mass
        return SliceMeasure(self.time, self.events, tuple(w / total for w in self.weights), self.temporal)

    def scaled(self, factor: Weight) -> "SliceMeasure":
        """Unnormalized copy with every weight multiplied by factor."""
        return SliceMeasure(self.time, self.events, tuple(w * factor for w in self.weights), self.temporal)

    def same_atoms(self, other: "SliceMeasure", tol: float = 0.0) -> bool:
        """Equality as atomic measures; exact unless a float tolerance is given."""
        mine, theirs = self.as_dict(), other.as_dict()
        if mine.keys() != theirs.keys():
            return False
        if tol == 0.0:
            return all(mine[e] == theirs[e] for e in mine)
        return all(abs(float(mine[e]) - float(theirs[e])) <= tol for e in mine)

    def validate(self, model: SpacetimeModel, time_tol: Optional[float] = None) -> None:
        """Raise unless this is a probability measure on its slice."""
        if not is_unit_mass(self.weights):
            raise MarginalMismatchError(f"Slice at time {self.time} has total mass {self.total_mass}")
        for e in self.events:
            model.validate_event(e)
        values = np.asarray(self.temporal(self.coords[:, 0], self.coords[:, 1]), dtype=float)
        if self.temporal.function_id == CANONICAL.function_id and time_tol is None:
            off = values != self.time
        else:
            tol = CONFIG.RESAMPLE_TOL if time_tol is None else time_tol
            off = np.abs(values - self.time) > tol * max(1.0, abs(self.time))
        if np.any(off):
            bad = self.events[int(np.argmax(off))]
            raise EventModelMismatchError(f"Atom {bad} does not lie on the slice {self.temporal.function_id} = {self.time}")


@dataclass(frozen=True)
class Evolution:
    """A time-indexed family of slice measures on a strictly increasing grid."""
    times: Tuple[float, ...]
    slices: Tuple[SliceMeasure, ...]

    def __post_init__(self):
        if len(self.times) != len(self.slices):
            raise ValueError("Evolution needs one slice per grid time")
        if len(self.times) == 0:
            raise ValueError("Evolution has no slices")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise GridMismatchError("Evolution grid must be strictly increasing")
        for t, s in zip(self.times, self.slices):
            if s.time != t:
                raise GridMismatchError(f"Slice time {s.time} does not match grid time {t}")

    @classmethod
    def from_slices(cls, slices: Sequence[SliceMeasure]) -> "Evolution":
        return cls(tuple(s.time for s in slices), tuple(slices))

    def __len__(self) -> int:
        return len(self.times)

    @property
    def interval(self) -> Tuple[float, float]:
        return self.times[0], self.times[-1]

    @property
    def grid(self) -> np.ndarray:
        return np.asarray(self.times, dtype=float)

    @property
    def temporal(self) -> TemporalFunction:
        return self.slices[0].temporal

    def index_of(self, t: float, tol: Optional[float] = None) -> int:
        tol = CONFIG.GRID_TOL if tol is None else tol
        grid = self.grid
        k = int(np.argmin(np.abs(grid - t)))
        if abs(grid[k] - t) > tol * max(1.0, abs(t)):
            raise GridMismatchError(f"Time {t} is not on the evolution grid")
        return k

    def slice_at(self, t: float) -> SliceMeasure:
        return self.slices[self.index_of(t)]

    def restrict(self, times: Sequence[float]) -> "Evolution":
        return Evolution.from_slices([self.slice_at(t) for t in times])

    def validate(self, model: SpacetimeModel) -> None:
        for s in self.slices:
            s.validate(model)

    @property
    def is_rational(self) -> bool:
        return all(s.is_rational for s in self.slices)


@dataclass(frozen=True)
class EtaAtoms:
    """The atoms of eta = int mu_t dt under the trapezoid rule, flattened over slices."""
    slice_index: np.ndarray
    coords: np.ndarray
    slice_mass: np.ndarray
    eta_weight: np.ndarray

    def __len__(self) -> int:
        return self.slice_index.size


def eta_atoms(ev: Evolution) -> EtaAtoms:
    quad = trapezoid_weights(ev.grid)
    index, coords, mass, eta = [], [], [], []
    for k, s in enumerate(ev.slices):
        for e, w in zip(s.events, s.weights):
            index.append(k)
            coords.append((e.t, e.x))
            mass.append(float(w))
            eta.append(quad[k] * float(w))
    return EtaAtoms(
        np.asarray(index, dtype=int),
        np.asarray(coords, dtype=float).reshape(-1, 2),
        np.asarray(mass, dtype=float),
        np.asarray(eta, dtype=float),
    )


def eta_integral(ev: Evolution, f: Union[SpacetimeFunction, Callable[[Event], float]]) -> float:
    """Trapezoid-in-time quadrature of t -> int f d mu_t over the evolution grid."""
    atoms = eta_atoms(ev)
    if isinstance(f, SpacetimeFunction):
        values = np.asarray(f(atoms.coords[:, 0], atoms.coords[:, 1]), dtype=float)
    else:
        values = np.array([float(f(Event(t, x))) for t, x in atoms.coords])
    return compensated_sum(atoms.eta_weight * values)


@dataclass(frozen=True)
class Coupling:
    """A joint measure of two slice measures, stored sparsely by atom indices."""
    source: SliceMeasure
    target: SliceMeasure
    mass: Dict[Tuple[int, int], Weight]

    def pairs(self) -> List[Tuple[Event, Event, Weight]]:
        return [(self.source.events[i], self.target.events[j], w) for (i, j), w in sorted(self.mass.items())]

    def row_sums(self) -> List[Weight]:
        return [weight_sum([w for (i, _), w in self.mass.items() if i == r] or [0]) for r in range(len(self.source))]

    def column_sums(self) -> List[Weight]:
        return [weight_sum([w for (_, j), w in self.mass.items() if j == c] or [0]) for c in range(len(self.target))]

    def marginal_violation(self) -> float:
        """Largest deviation of a row or column sum from the prescribed weight."""
        worst = 0.0
        for got, want in zip(self.row_sums(), self.source.weights):
            worst = max(worst, abs(float(got - want)))
        for got, want in zip(self.column_sums(), self.target.weights):
            worst = max(worst, abs(float(got - want)))
        return worst

    def has_exact_marginals(self) -> bool:
        return list(self.row_sums()) == list(self.source.weights) and list(self.column_sums()) == list(self.target.weights)

    def acausal_pairs(self, model: SpacetimeModel, slack: float = 0.0) -> List[Tuple[int, int]]:
        return [
            (i, j) for (i, j), w in sorted(self.mass.items())
            if w > 0 and not model.causally_precedes(self.source.events[i], self.target.events[j], slack)
        ]

    def is_valid(self, model: SpacetimeModel, slack: float = 0.0, tol: float = 1e-12) -> bool:
        """Marginals reproduce both measures and every pair carrying mass is causal."""
        if any(w <= 0 for w in self.mass.values()):
            return False
        marginals_ok = self.has_exact_marginals() if (self.source.is_rational and self.target.is_rational) else self.marginal_violation() <= tol
        return marginals_ok and not self.acausal_pairs(model, slack)

    def transport_cost(self, model: SpacetimeModel) -> float:
        src = model.embed_coords(self.source.coords[:, 0], self.source.coords[:, 1])
        dst = model.embed_coords(self.target.coords[:, 0], self.target.coords[:, 1])
        return compensated_sum(float(w) * float(np.sum((dst[j] - src[i]) ** 2)) for (i, j), w in self.mass.items())
