from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from causevo.curves.model import CausalCurve
from causevo.curves.operations import concatenate_curves, resample_curve
from causevo.measures.model import Coupling, Evolution, MarginalMismatchError, SliceMeasure
from causevo.paths.model import CurveMeasure
from causevo.spacetime.model import Event, GridMismatchError, NotCausallyRelatedError, SpacetimeModel
from causevo.utils.numerics import Weight


def pushforward_eval(sigma: CurveMeasure, t: float) -> SliceMeasure:
    """(ev_t) pushed forward: the curve positions at parameter t, coincident events merged."""
    k = sigma.index_of(t)
    time = float(sigma.grid[k])
    return SliceMeasure.from_atoms(time, [(c.point(k), w) for c, w in sigma.atoms()], sigma.temporal)


def induced_evolution(sigma: CurveMeasure) -> Evolution:
    """t -> (ev_t) sigma on the measure's grid."""
    return Evolution.from_slices([pushforward_eval(sigma, t) for t in sigma.grid])


def joint_pushforward(
    sigma: CurveMeasure,
    s: float,
    t: float,
    model: Optional[SpacetimeModel] = None,
    slack: float = 0.0,
) -> Coupling:
    """
    (ev_s, ev_t) pushed forward as a coupling of the two evaluation pushforwards.
    With a model, causality of every pair is checked.
    """
    if s > t:
        raise ValueError(f"Joint pushforward needs s <= t, got s={s}, t={t}")
    ks, kt = sigma.index_of(s), sigma.index_of(t)
    source, target = pushforward_eval(sigma, s), pushforward_eval(sigma, t)
    src_index = {e: i for i, e in enumerate(source.events)}
    dst_index = {e: j for j, e in enumerate(target.events)}

    mass: Dict[Tuple[int, int], Weight] = {}
    for c, w in sigma.atoms():
        pair = (src_index[c.point(ks)], dst_index[c.point(kt)])
        mass[pair] = mass[pair] + w if pair in mass else w

    coupling = Coupling(source, target, mass)
    if model is not None:
        bad = coupling.acausal_pairs(model, slack)
        if bad:
            i, j = bad[0]
            raise NotCausallyRelatedError(
                f"Curve measure couples {source.events[i]} to {target.events[j]}, which are not causally related"
            )
    return coupling


def concatenate_curve_measures(first: CurveMeasure, second: CurveMeasure, tol: float = 1e-12) -> CurveMeasure:
    """
    Concatenation of a measure on [a, b] with one on [b, c].

    At each event q of the shared slice, incoming curves with weights u_i and outgoing
    curves with weights v_j are paired with weight u_i * v_j / m(q).
    """
    b = float(first.grid[-1])
    if float(second.grid[0]) != b:
        raise GridMismatchError(f"Curve measures do not meet: first ends at {b}, second starts at {second.grid[0]}")

    left, right = pushforward_eval(first, b), pushforward_eval(second, b)
    exact = first.is_rational and second.is_rational
    if not left.same_atoms(right, tol=0.0 if exact else tol):
        raise MarginalMismatchError(f"Evaluation pushforwards at the junction time {b} differ")
    m = left.as_dict()

    outgoing: Dict[Event, List[Tuple[CausalCurve, Weight]]] = {}
    for c, v in second.atoms():
        outgoing.setdefault(c.start, []).append((c, v))

    atoms = []
    for c1, u in first.atoms():
        q = c1.end
        for c2, v in outgoing[q]:
            atoms.append((concatenate_curves(c1, c2), u * v / m[q]))
    return CurveMeasure.from_atoms(atoms)


def pad_with_rest_curves(model: SpacetimeModel, sigma: CurveMeasure, new_grid: ArrayLike) -> CurveMeasure:
    """
    Extend every curve to new_grid by worldlines at rest before its start and after
    its end. The old grid must appear in new_grid as a contiguous block.
    """
    if not sigma.temporal.function_id == "canonical":
        raise ValueError("Rest-curve padding needs canonically parametrized curves")
    grid = np.asarray(new_grid, dtype=float)
    old = sigma.grid
    start = int(np.searchsorted(grid, old[0]))
    if start + old.size > grid.size or not np.array_equal(grid[start:start + old.size], old):
        raise GridMismatchError("The curve grid must be a contiguous block of the padded grid")
    before, after = grid[:start], grid[start + old.size:]

    atoms = []
    for c, w in sigma.atoms():
        coords = np.concatenate([
            model.rest_points(c.xs[0], before),
            c.coords,
            model.rest_points(c.xs[-1], after),
        ])
        atoms.append((CausalCurve(grid, coords), w))
    return CurveMeasure.from_atoms(atoms)


def resample_curve_measure(model: SpacetimeModel, sigma: CurveMeasure, new_grid: ArrayLike) -> CurveMeasure:
    return CurveMeasure.from_atoms((resample_curve(model, c, new_grid), w) for c, w in sigma.atoms())
