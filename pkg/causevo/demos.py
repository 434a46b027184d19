"""
Worked fixtures with known curve measures.

Example 1 is a single worldline t -> (t, 0.3 sin t) on Minkowski space seen as a
Dirac evolution. Example 2 is the uniform measure on the cylinder's circle, held
constant in time, which is carried by rotating curves of any drift a in [-1, 1].
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from causevo.curves.model import CausalCurve
from causevo.measures.model import Evolution, SliceMeasure
from causevo.paths.model import CurveMeasure
from causevo.spacetime.model import TWO_PI, Event, SpacetimeModel
from causevo.spacetime.models import Cylinder, Minkowski1p1
from causevo.testfns.bumps import (
    INTERIOR_MARGIN_STEPS,
    BumpFunction,
    TestFunctionSupportError,
    check_interior_support,
)

EXAMPLE1_AMPLITUDE = 0.3
EXAMPLE1_STEPS = 6280
EXAMPLE1_CENTERS = (1.2, 2.2, 3.2, 4.2, 5.2)
EXAMPLE1_BUMP_RADIUS = 0.8

EXAMPLE2_ATOMS = 64
EXAMPLE2_DRIFTS = (0.0, 0.5, 1.0)


@dataclass(frozen=True, eq=False)
class DemoCase:
    name: str
    model: SpacetimeModel
    ev: Evolution
    sigma: CurveMeasure
    bumps: List[BumpFunction]


def dirac_evolution(curve: CausalCurve, rational: bool = True) -> Evolution:
    """The evolution t -> delta_{gamma(t)} on the curve's own grid."""
    return Evolution.from_slices([SliceMeasure.dirac(p, rational) for p in curve.points])


# Example 1

def example1_curve(steps: int = EXAMPLE1_STEPS, amplitude: float = EXAMPLE1_AMPLITUDE) -> CausalCurve:
    """(t, amplitude sin t) on [0, 2pi]; steps divisible by 8 keeps the level-3 dyadic times on the grid."""
    times = np.linspace(0.0, TWO_PI, steps + 1)
    return CausalCurve.from_path(times, amplitude * np.sin(times))


def example1_evolution(steps: int = EXAMPLE1_STEPS) -> Evolution:
    return dirac_evolution(example1_curve(steps))


def example1_sigma(steps: int = EXAMPLE1_STEPS) -> CurveMeasure:
    return CurveMeasure.dirac(example1_curve(steps))


def example1_bumps(times: Sequence[float], amplitude: float = EXAMPLE1_AMPLITUDE) -> List[BumpFunction]:
    """Five bumps centred on the worldline."""
    battery = [BumpFunction(t0, amplitude * np.sin(t0), EXAMPLE1_BUMP_RADIUS, 1.0) for t0 in EXAMPLE1_CENTERS]
    for phi in battery:
        check_interior_support(phi, times)
    return battery


def example1_min_steps() -> int:
    """Fewest grid steps on [0, 2pi] that keep every Example 1 bump interior."""
    lo = min(EXAMPLE1_CENTERS) - EXAMPLE1_BUMP_RADIUS
    hi = max(EXAMPLE1_CENTERS) + EXAMPLE1_BUMP_RADIUS
    return math.ceil(INTERIOR_MARGIN_STEPS * TWO_PI / min(lo, TWO_PI - hi))


def example1(steps: int = EXAMPLE1_STEPS) -> DemoCase:
    if steps < example1_min_steps():
        raise TestFunctionSupportError(
            f"Example 1 needs at least {example1_min_steps()} steps to hold its bumps, got {steps}"
        )
    curve = example1_curve(steps)
    return DemoCase(
        "example1",
        Minkowski1p1(),
        dirac_evolution(curve),
        CurveMeasure.dirac(curve),
        example1_bumps(curve.times),
    )


# Example 2

def _angle(j: int, n_atoms: int) -> float:
    return TWO_PI * (j % n_atoms) / n_atoms


def example2_times(n_atoms: int = EXAMPLE2_ATOMS) -> np.ndarray:
    """n_atoms + 1 times covering [0, 4pi]; one step moves a unit-drift curve by two atoms."""
    return np.array([2.0 * TWO_PI * m / n_atoms for m in range(n_atoms + 1)])


def _shift_per_step(drift: float) -> int:
    shift = 2.0 * drift
    if not -1.0 <= drift <= 1.0 or shift != round(shift):
        raise ValueError(f"Drift must be one of -1, -0.5, 0, 0.5, 1, got {drift}")
    return int(round(shift))


def example2_evolution(n_atoms: int = EXAMPLE2_ATOMS) -> Evolution:
    """The uniform measure on the circle at every time."""
    w = Fraction(1, n_atoms)
    return Evolution.from_slices([
        SliceMeasure.from_atoms(float(t), [(Event(float(t), _angle(j, n_atoms)), w) for j in range(n_atoms)])
        for t in example2_times(n_atoms)
    ])


def example2_sigma(drift: float, n_atoms: int = EXAMPLE2_ATOMS) -> CurveMeasure:
    """Uniformly weighted curves theta_j + drift t, one from every atom."""
    shift = _shift_per_step(drift)
    times = example2_times(n_atoms)
    w = Fraction(1, n_atoms)
    curves = []
    for j in range(n_atoms):
        coords = [[float(t), _angle(j + shift * m, n_atoms)] for m, t in enumerate(times)]
        curves.append(CausalCurve(times, coords))
    return CurveMeasure(tuple(curves), tuple([w] * n_atoms))


def example2_bumps(times: Sequence[float], centers_t: Optional[Sequence[float]] = None) -> List[BumpFunction]:
    """Angle-independent bumps and periodic bumps localized in angle."""
    centers_t = (np.pi, 2.0 * np.pi, 3.0 * np.pi) if centers_t is None else centers_t
    battery = [BumpFunction(t0, 0.0, 1.5, None) for t0 in centers_t]
    battery += [BumpFunction(t0, np.pi / 2.0, 1.5, 1.0, period=TWO_PI) for t0 in centers_t]
    for phi in battery:
        check_interior_support(phi, times)
    return battery


def example2(drift: float = 1.0, n_atoms: int = EXAMPLE2_ATOMS) -> DemoCase:
    ev = example2_evolution(n_atoms)
    return DemoCase(
        f"example2(a={drift:g})",
        Cylinder(),
        ev,
        example2_sigma(drift, n_atoms),
        example2_bumps(ev.times),
    )
